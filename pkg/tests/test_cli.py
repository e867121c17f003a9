import json
import math

from click.testing import CliRunner

from currentdual.cli import main

LOG2 = math.log(2.0)


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_distance_liouville():
    r = run(
        "distance",
        "--presentation", "punctured_torus",
        "--current", "liouville",
        "--point", "0,1",
        "--point", "0,2",
    )
    assert r.exit_code == 0, r.output
    rep = json.loads(r.stdout)
    assert abs(rep["distance"] - LOG2) < 1e-9
    assert rep["seed"] == 0 and "version" in rep


def test_distance_missing_file_exit2():
    r = run(
        "distance",
        "--presentation", "no_such_file.json",
        "--current", "liouville",
        "--point", "0,1",
        "--point", "0,2",
    )
    assert r.exit_code == 2


def test_distance_bad_point_exit2():
    r = run(
        "distance",
        "--presentation", "punctured_torus",
        "--current", "liouville",
        "--point", "zero",
        "--point", "0,2",
    )
    assert r.exit_code == 2


def test_corrupted_presentation_exit1(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"generators": [[2, 0, 0, 1]], "basepoint": [0, 1]}))
    r = run("verify", "--presentation", str(p), "--current", "liouville")
    assert r.exit_code == 1


def test_length_spectrum_atomic_b():
    r = run(
        "length-spectrum",
        "--presentation", "punctured_torus",
        "--current", "words:b",
        "--word-bound", "2",
    )
    assert r.exit_code == 0
    rep = json.loads(r.stdout)
    table = {row["word"]: row["length"] for row in rep["spectrum"]}
    assert table["A"] == 1.0
    assert table["B"] == 0.0
    assert table["AB"] == 1.0
    assert rep["worst_cross_check_error"] <= 1e-9


def test_delta_ab():
    r = run(
        "delta",
        "--presentation", "punctured_torus",
        "--current", "words:a,b",
        "--radius", "3.0",
    )
    assert r.exit_code == 0
    rep = json.loads(r.stdout)
    assert rep["value"] == 1.0
    assert rep["witness_corners"]
    assert len(rep["convergence"]) == 3


def test_delta_liouville():
    r = run("delta", "--presentation", "punctured_torus", "--current", "liouville")
    assert r.exit_code == 0
    rep = json.loads(r.stdout)
    assert abs(rep["value"] - LOG2) < 1e-3


def test_dual_graph_outputs(tmp_path):
    out = tmp_path / "graph.json"
    svg = tmp_path / "graph.svg"
    r = run(
        "dual-graph",
        "--presentation", "punctured_torus",
        "--current", "words:a,b",
        "--radius", "1.5",
        "--out", str(out),
        "--svg", str(svg),
    )
    assert r.exit_code == 0
    rep = json.loads(out.read_text())
    assert rep["class_counts"]["crossing_point"] == 1
    assert (tmp_path / "graph.csv").exists()
    assert (tmp_path / "graph.png").exists()
    assert svg.read_text().startswith("<?xml")


def test_verify_passes_and_reports_suites():
    r = run(
        "verify",
        "--presentation", "punctured_torus",
        "--current", "words:a,b",
        "--samples", "16",
        "--seed", "9",
    )
    assert r.exit_code == 0, r.output
    rep = json.loads(r.stdout)
    assert rep["passed"]
    names = {s["name"] for s in rep["suites"]}
    assert {"metric_axioms", "group_invariance", "length_vs_intersection"} <= names


def test_reports_byte_identical():
    a = run("verify", "--presentation", "punctured_torus", "--current", "liouville", "--samples", "12", "--seed", "4")
    b = run("verify", "--presentation", "punctured_torus", "--current", "liouville", "--samples", "12", "--seed", "4")
    assert a.stdout == b.stdout
    assert a.exit_code == b.exit_code == 0


def test_distance_out_writes_csv_and_png(tmp_path):
    out = tmp_path / "d.json"
    r = run(
        "distance",
        "--presentation", "punctured_torus",
        "--current", "words:a,b",
        "--point", "0,1",
        "--point", "0.4,1.3",
        "--out", str(out),
        "--svg", str(tmp_path / "d.svg"),
    )
    assert r.exit_code == 0
    assert out.exists()
    assert (tmp_path / "d.csv").exists()
    assert (tmp_path / "d.png").exists()
    assert (tmp_path / "d.svg").exists()
