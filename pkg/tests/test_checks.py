import math

import pytest

from currentdual import (
    AtomicCurrent,
    DecompositionSpec,
    coboundedness_probe,
    decomposition_current,
    dual_distance,
    fixed_point_probe,
    gh_epsilon_related,
    verify_chain_distance,
    verify_delta_decomposition,
    verify_piece_intersection,
    verify_special_curves,
)
from currentdual.checks import sample_points
from currentdual.currents import scale_current


@pytest.fixture(scope="module")
def decomposition(genus2):
    nu1 = AtomicCurrent.from_words(genus2, [("a", 1.0), ("b", 1.0)])
    nu2 = AtomicCurrent.from_words(genus2, [("c", 1.0), ("d", 1.0)])
    s = genus2.element("abAB")
    return DecompositionSpec(((nu1, 1), (nu2, 1)), ((s, 2.0),))


@pytest.fixture(scope="module")
def graded(genus2, decomposition):
    return decomposition_current(decomposition, genus2)


def test_special_curves_verified(genus2, graded, decomposition):
    out = verify_special_curves(graded, decomposition, word_bound=3)
    assert out["ok"], out["violations"]


def test_special_curve_violation_detected(genus2, decomposition):
    # declaring a generator special must fail: i(mu, a) > 0
    bad = DecompositionSpec(decomposition.subcurrents, ((genus2.element("a"), 1.0),))
    mu = decomposition_current(bad, genus2)
    out = verify_special_curves(mu, bad, word_bound=1)
    assert not out["ok"]


def test_chain_distance(graded, decomposition):
    out = verify_chain_distance(graded, decomposition, n_pairs=40, seed=11, spread=1.8)
    assert out["ok"], out
    assert out["worst_error"] <= 1e-9
    assert out["region_violations"] == 0


def test_piece_intersection(graded, decomposition):
    out = verify_piece_intersection(graded, decomposition, n_samples=12, seed=2)
    assert out["ok"], out


def test_delta_decomposition(graded, decomposition):
    out = verify_delta_decomposition(graded, decomposition, R=2.0)
    assert out["ok"]
    assert out["lower_ok"] and out["upper_ok"]
    assert max(out["delta_pieces"]) <= out["delta_mu"] + 1e-9


def test_gh_relation_identity(genus2, graded):
    K = sample_points(genus2, 8, 5, spread=1.4)
    P = [genus2.element("a"), genus2.element("c")]
    rep = gh_epsilon_related(graded, graded, K, P, 1e-12)
    assert rep.passed and rep.worst_distortion == 0.0


def test_gh_relation_detects_distortion(genus2, graded):
    K = sample_points(genus2, 8, 5, spread=1.4)
    P = [genus2.element("a")]
    doubled = scale_current(graded, 2.0)
    rep = gh_epsilon_related(graded, doubled, K, P, 1e-6)
    assert not rep.passed
    assert rep.worst_distortion > 0.1


def test_fixed_point_probe(genus2, graded):
    s = genus2.element("abAB")
    assert fixed_point_probe(graded, s)["fixed_witness"] is not None
    assert fixed_point_probe(graded, genus2.element("a"))["fixed_witness"] is None


def test_coboundedness_probe(genus2, graded):
    pts = sample_points(genus2, 6, 13, spread=2.5)
    r = coboundedness_probe(graded, pts)
    assert 0.0 <= r < 50.0


def test_piece_intersection_violation_detected(genus2, decomposition):
    # a crossing curve is not special: points on its axis are separated by mu
    bad = DecompositionSpec(decomposition.subcurrents, ((genus2.element("ab"), 1.0),))
    mu = decomposition_current(bad, genus2)
    out = verify_piece_intersection(mu, bad, n_samples=12, seed=2)
    assert not out["ok"]
