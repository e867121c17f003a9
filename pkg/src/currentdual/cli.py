"""Command line front end.

Reports are JSON on stdout (and to --out when given), byte-identical for a
fixed seed; wall-clock timings go to stderr. When --out is set, each command
also writes a CSV table and a matplotlib PNG figure next to the report.
Exit codes: 0 pass, 1 assertion or verification failure, 2 usage/IO error.
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
import time

import click
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import __version__
from .checks import sample_points
from .currents import (
    AtomicCurrent,
    LiouvilleCurrent,
    SumCurrent,
    box_measure,
    flatten,
    intersection_with_class,
    load_current,
)
from .dual_graph import build_arrangement, build_dual_graph, quotient_classes, render_svg
from .dual_metric import (
    delta_lower_bound_boxes,
    distance_matrix,
    defect_from_matrix,
    dual_distance,
    translation_length,
)
from .errors import CurrentDualError
from .group import conjugacy_classes, load_presentation
from .hyperbolic import Box, PlanePoint, apply, hyp_distance, opposite_box, to_disk, trace_translation_length


def _fail(code: int, reason: str, detail: str = "") -> None:
    print(json.dumps({"error": reason, "detail": detail}, sort_keys=True), file=sys.stderr)
    sys.exit(code)


def _load_inputs(presentation: str, current: str | None):
    try:
        pres = load_presentation(presentation)
    except FileNotFoundError as e:
        _fail(2, "FileNotFound", str(e))
    except CurrentDualError as e:
        _fail(1, type(e).__name__, str(e))
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as e:
        _fail(2, "BadInput", str(e))
    mu = None
    if current is not None:
        try:
            mu = _parse_current(current, pres)
        except FileNotFoundError as e:
            _fail(2, "FileNotFound", str(e))
        except CurrentDualError as e:
            _fail(1, type(e).__name__, str(e))
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as e:
            _fail(2, "BadInput", str(e))
    return pres, mu


def _parse_current(spec: str, pres):
    """A current spec: 'liouville', 'words:a=1,b=2', or a JSON file path."""
    if spec == "liouville":
        return LiouvilleCurrent(pres, 1.0)
    if spec.startswith("liouville:"):
        return LiouvilleCurrent(pres, float(spec.split(":", 1)[1]))
    if spec.startswith("words:"):
        comps = []
        for tok in spec[len("words:"):].split(","):
            if "=" in tok:
                word, wt = tok.split("=")
                comps.append((word, float(wt)))
            else:
                comps.append((tok, 1.0))
        return AtomicCurrent.from_words(pres, comps)
    return load_current(spec, pres)


def _parse_point(text: str) -> PlanePoint:
    try:
        x, y = (float(v) for v in text.split(","))
        return PlanePoint(complex(x, y))
    except (ValueError, TypeError):
        _fail(2, "BadPoint", f"expected 're,im' with im > 0, got {text!r}")


def _emit(report: dict, out: str | None, rows=None, header=None, figure=None, t0: float | None = None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        stem = os.path.splitext(out)[0]
        if rows is not None:
            with open(stem + ".csv", "w", newline="") as fh:
                w = csv.writer(fh)
                if header:
                    w.writerow(header)
                w.writerows(rows)
        if figure is not None:
            fig = figure()
            fig.savefig(stem + ".png", dpi=120)
            plt.close(fig)
    if t0 is not None:
        print(f"wall-clock {time.perf_counter() - t0:.3f}s", file=sys.stderr)


def _base_report(command: str, seed: int, **params) -> dict:
    rep = {"version": __version__, "command": command, "seed": seed}
    rep.update(params)
    return rep


def _disk_xy(p: PlanePoint):
    w = to_disk(p.z)
    return w.real, w.imag


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Dual pseudo-metric computations for geodesic currents."""


@main.command()
@click.option("--presentation", required=True, help="preset name or presentation JSON path")
@click.option("--current", "current_spec", required=True, help="current spec: liouville, words:..., or path")
@click.option("--point", "points", multiple=True, required=True, help="point as 're,im' (repeat twice)")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, help="write report JSON (+ CSV and PNG) here")
@click.option("--svg", default=None, help="render the supporting arrangement to this SVG path")
def distance(presentation, current_spec, points, seed, out, svg):
    """Dual distance between two configured points."""
    t0 = time.perf_counter()
    if len(points) != 2:
        _fail(2, "BadArguments", "exactly two --point values required")
    pres, mu = _load_inputs(presentation, current_spec)
    p, q = (_parse_point(t) for t in points)
    d = dual_distance(mu, p, q)
    report = _base_report(
        "distance",
        seed,
        presentation=presentation,
        current=current_spec,
        points=list(points),
        distance=d,
        hyp_distance=hyp_distance(p, q),
    )
    if svg:
        _render_current_svg(mu, pres, svg, radius=max(hyp_distance(pres.basepoint, p), hyp_distance(pres.basepoint, q)) + 1.0)

    def figure():
        fig, ax = plt.subplots(figsize=(4, 4))
        circle = plt.Circle((0, 0), 1.0, fill=False, color="black")
        ax.add_patch(circle)
        for pt, name in ((p, "p"), (q, "q")):
            x, y = _disk_xy(pt)
            ax.plot([x], [y], "o")
            ax.annotate(name, (x, y))
        ax.set_aspect("equal")
        ax.set_xlim(-1.05, 1.05)
        ax.set_ylim(-1.05, 1.05)
        ax.set_title(f"d = {d:.6f}")
        return fig

    _emit(report, out, rows=[[points[0], points[1], d]], header=["p", "q", "distance"], figure=figure, t0=t0)


def _render_current_svg(mu, pres, path: str, radius: float) -> None:
    atoms = [leaf for leaf in flatten(mu) if isinstance(leaf, AtomicCurrent)]
    if not atoms:
        return
    merged = AtomicCurrent(tuple(c for a in atoms for c in a.components), pres)
    A = build_arrangement(merged, radius)
    render_svg(A, None, path)


@main.command("length-spectrum")
@click.option("--presentation", required=True)
@click.option("--current", "current_spec", required=True)
@click.option("--word-bound", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None)
def length_spectrum(presentation, current_spec, word_bound, seed, out):
    """Dual translation lengths up to a word bound, with intersection cross-check."""
    t0 = time.perf_counter()
    pres, mu = _load_inputs(presentation, current_spec)
    rows = []
    worst = 0.0
    for c in conjugacy_classes(pres, word_bound):
        if c.matrix.classify() != "hyperbolic":
            continue
        ell = translation_length(mu, c)
        inum = intersection_with_class(mu, c)
        err = abs(ell - inum)
        worst = max(worst, err)
        rows.append([c.word, ell, inum, trace_translation_length(c.matrix), err])
    rows.sort(key=lambda r: (len(r[0]), r[0]))
    report = _base_report(
        "length-spectrum",
        seed,
        presentation=presentation,
        current=current_spec,
        word_bound=word_bound,
        classes=len(rows),
        worst_cross_check_error=worst,
        spectrum=[{"word": r[0], "length": r[1], "intersection": r[2]} for r in rows],
    )

    def figure():
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.scatter([len(r[0]) for r in rows], [r[1] for r in rows], s=12)
        ax.set_xlabel("word length")
        ax.set_ylabel("dual translation length")
        fig.tight_layout()
        return fig

    _emit(report, out, rows=rows, header=["word", "length", "intersection", "trace_length", "error"], figure=figure, t0=t0)
    if worst > 1e-9:
        sys.exit(1)


@main.command()
@click.option("--presentation", required=True)
@click.option("--current", "current_spec", required=True)
@click.option("--radius", default=4.0, show_default=True, help="largest truncation radius")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None)
def delta(presentation, current_spec, radius, seed, out):
    """Certified lower bound for the hyperbolicity constant, with convergence table."""
    t0 = time.perf_counter()
    pres, mu = _load_inputs(presentation, current_spec)
    radii = [0.5 * radius, 0.75 * radius, radius]
    table = []
    cert = None
    for R in radii:
        cert = delta_lower_bound_boxes(mu, R=R)
        table.append([R, cert.value])
        if not math.isfinite(cert.truncation_radius):
            # continuous search ignores truncation; one row is enough
            table = [[radius, cert.value]]
            break
    corners = [list(cert.best_box.corner_angles())] if cert.best_box is not None else []
    report = _base_report(
        "delta",
        seed,
        presentation=presentation,
        current=current_spec,
        radius=radius,
        value=cert.value,
        method=cert.method,
        witness_corners=corners,
        convergence=[{"radius": r, "value": v} for r, v in table],
    )

    def figure():
        fig, ax = plt.subplots(figsize=(4.5, 3))
        ax.plot([r for r, _ in table], [v for _, v in table], "o-")
        ax.set_xlabel("truncation radius")
        ax.set_ylabel("certified lower bound")
        fig.tight_layout()
        return fig

    _emit(report, out, rows=table, header=["radius", "value"], figure=figure, t0=t0)


@main.command("dual-graph")
@click.option("--presentation", required=True)
@click.option("--current", "current_spec", required=True)
@click.option("--radius", default=2.0, show_default=True, help="window radius")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None)
@click.option("--svg", default=None)
def dual_graph(presentation, current_spec, radius, seed, out, svg):
    """Quotient classes and adjacency graph of a multi-curve arrangement."""
    t0 = time.perf_counter()
    pres, mu = _load_inputs(presentation, current_spec)
    leaves = list(flatten(mu))
    if len(leaves) != 1 or not isinstance(leaves[0], AtomicCurrent):
        _fail(2, "BadCurrent", "dual-graph needs a single atomic current")
    mu = leaves[0]
    A = build_arrangement(mu, radius)
    classes = quotient_classes(A)
    G = build_dual_graph(classes, mu, A)
    if svg:
        render_svg(A, G, svg)
    kinds = {}
    for n in G.nodes:
        kinds[n.kind] = kinds.get(n.kind, 0) + 1
    report = _base_report(
        "dual-graph",
        seed,
        presentation=presentation,
        current=current_spec,
        radius=radius,
        crossing_free=A.crossing_free,
        class_counts=kinds,
        graph=G.export(),
    )
    rows = [[i, j, ln] for i, j, ln in G.edges]

    def figure():
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        circle = plt.Circle((0, 0), 1.0, fill=False, color="black")
        ax.add_patch(circle)
        for axn in A.axes:
            k1, k2 = axn.k1, axn.k2
            ax.plot([k1.real, k2.real], [k1.imag, k2.imag], lw=0.8)
        for c in A.crossings:
            ax.plot([c.klein.real], [c.klein.imag], "k.", ms=4)
        ax.set_aspect("equal")
        ax.set_xlim(-1.05, 1.05)
        ax.set_ylim(-1.05, 1.05)
        ax.set_title("axis arrangement (Klein model)")
        return fig

    _emit(report, out, rows=rows, header=["node_a", "node_b", "length"], figure=figure, t0=t0)


@main.command()
@click.option("--presentation", required=True)
@click.option("--current", "current_spec", required=True)
@click.option("--samples", default=40, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--epsilon", default=1e-9, show_default=True)
@click.option("--word-bound", default=3, show_default=True)
@click.option("--radius", default=2.0, show_default=True)
@click.option("--out", default=None)
def verify(presentation, current_spec, samples, seed, epsilon, word_bound, radius, out):
    """Invariant suites: metric axioms, group invariance, Crofton, box relation,
    four-point bounds, length cross-checks, sum additivity."""
    t0 = time.perf_counter()
    pres, mu = _load_inputs(presentation, current_spec)
    pts = sample_points(pres, samples, seed, spread=radius)
    suites = []

    def record(name, passed, worst):
        suites.append({"name": name, "passed": bool(passed), "worst": float(worst)})

    # metric axioms
    worst = 0.0
    for i in range(len(pts) - 2):
        p, q, r = pts[i], pts[i + 1], pts[i + 2]
        worst = max(worst, abs(dual_distance(mu, p, q) - dual_distance(mu, q, p)))
        worst = max(worst, dual_distance(mu, p, r) - dual_distance(mu, p, q) - dual_distance(mu, q, r))
        worst = max(worst, dual_distance(mu, p, p))
    record("metric_axioms", worst <= max(epsilon, 1e-9), worst)

    # group invariance under the generators
    worst = 0.0
    for letter in pres.labels:
        g = pres.generators[letter]
        for i in range(0, len(pts) - 1, 2):
            p, q = pts[i], pts[i + 1]
            worst = max(worst, abs(dual_distance(mu, apply(g, p), apply(g, q)) - dual_distance(mu, p, q)))
    record("group_invariance", worst <= max(epsilon, 1e-9), worst)

    liouville_leaves = [l for l in flatten(mu) if isinstance(l, LiouvilleCurrent)]
    if liouville_leaves:
        lv = liouville_leaves[0]
        worst = 0.0
        for i in range(0, len(pts) - 1, 2):
            p, q = pts[i], pts[i + 1]
            worst = max(worst, abs(dual_distance(lv, p, q) - lv.scale * hyp_distance(p, q)))
        record("crofton", worst <= 1e-9, worst)

        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(200):
            g = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=4))
            B = Box.from_angles(g[0], g[1], g[2], g[3])
            worst = max(worst, abs(math.exp(-box_measure(lv, B)) + math.exp(-box_measure(lv, opposite_box(B))) - 1.0))
        record("box_relation", worst <= 1e-9, worst)

    # length vs intersection cross-check
    worst = 0.0
    for c in conjugacy_classes(pres, min(word_bound, 3)):
        if c.matrix.classify() != "hyperbolic":
            continue
        worst = max(worst, abs(translation_length(mu, c) - intersection_with_class(mu, c)))
    record("length_vs_intersection", worst <= 1e-9, worst)

    # sum additivity
    if isinstance(mu, SumCurrent):
        worst = 0.0
        for i in range(0, len(pts) - 1, 2):
            p, q = pts[i], pts[i + 1]
            total = sum(dual_distance(part, p, q) for part in mu.parts)
            worst = max(worst, abs(dual_distance(mu, p, q) - total))
        record("sum_additivity", worst <= 1e-12, worst)

    # four-point defects against the certified constant
    D = distance_matrix(mu, pts)
    cert = delta_lower_bound_boxes(mu, R=radius)
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(500):
        idx = rng.choice(len(pts), size=4, replace=False)
        worst = max(worst, defect_from_matrix(D, tuple(idx)))
    bound_known = not math.isfinite(cert.truncation_radius)
    passed = worst <= 2.0 * cert.value + 1e-6 if bound_known else True
    record("four_point", passed, worst)

    ok = all(s["passed"] for s in suites)
    report = _base_report(
        "verify",
        seed,
        presentation=presentation,
        current=current_spec,
        samples=samples,
        epsilon=epsilon,
        word_bound=word_bound,
        radius=radius,
        passed=ok,
        suites=suites,
    )
    rows = [[s["name"], s["passed"], s["worst"]] for s in suites]

    def figure():
        fig, ax = plt.subplots(figsize=(5, 3))
        names = [s["name"] for s in suites]
        vals = [max(s["worst"], 1e-18) for s in suites]
        ax.barh(names, np.log10(vals))
        ax.set_xlabel("log10 worst residual")
        fig.tight_layout()
        return fig

    _emit(report, out, rows=rows, header=["suite", "passed", "worst"], figure=figure, t0=t0)
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
