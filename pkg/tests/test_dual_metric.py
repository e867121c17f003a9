import math

import numpy as np
import pytest

from currentdual import (
    AtomicCurrent,
    NotConvexPosition,
    PlanePoint,
    SumCurrent,
    apply,
    delta_lower_bound_boxes,
    delta_via_double_transversals,
    distance_matrix,
    dual_distance,
    filling_ball_probe,
    four_point_defect,
    hyp_distance,
    same_point,
    translation_length,
)
from currentdual.checks import sample_points
from currentdual.dual_metric import defect_from_matrix, double_transversal_value
from currentdual.hyperbolic import axis, axis_point, geodesic_point

LOG2 = math.log(2.0)


def test_liouville_distance_is_hyperbolic(liouville):
    rng = np.random.default_rng(0)
    for _ in range(60):
        p = PlanePoint(complex(rng.uniform(-2, 2), math.exp(rng.uniform(-1, 1))))
        q = PlanePoint(complex(rng.uniform(-2, 2), math.exp(rng.uniform(-1, 1))))
        assert abs(dual_distance(liouville, p, q) - hyp_distance(p, q)) < 1e-9


def test_metric_axioms_atomic(torus, ab_current):
    pts = sample_points(torus, 12, 4, spread=1.8)
    for i in range(10):
        p, q, r = pts[i], pts[i + 1], (pts + pts)[i + 2]
        assert dual_distance(ab_current, p, q) == dual_distance(ab_current, q, p)
        assert (
            dual_distance(ab_current, p, r)
            <= dual_distance(ab_current, p, q) + dual_distance(ab_current, q, r) + 1e-12
        )


def test_group_invariance(torus, ab_current):
    g = torus.generators["a"]
    pts = sample_points(torus, 8, 7, spread=1.5)
    for p, q in zip(pts[:-1], pts[1:]):
        assert (
            abs(dual_distance(ab_current, apply(g, p), apply(g, q)) - dual_distance(ab_current, p, q))
            < 1e-12
        )


def test_distance_matrix_matches_pairwise(torus, ab_current):
    pts = sample_points(torus, 8, 2, spread=1.5)
    D = distance_matrix(ab_current, pts)
    for i in range(len(pts)):
        for j in range(len(pts)):
            assert abs(D[i, j] - dual_distance(ab_current, pts[i], pts[j])) < 1e-12


def test_same_point_quotient(torus, ab_current):
    # two points inside one complementary region are identified
    p = PlanePoint(0.05 + 1.02j)
    q = PlanePoint(0.06 + 1.03j)
    assert same_point(ab_current, p, q) == (dual_distance(ab_current, p, q) <= 1e-10)


def test_translation_length_homogeneous(torus, ab_current):
    base = translation_length(ab_current, torus.element("ab"))
    for n in (2, 3):
        assert abs(translation_length(ab_current, torus.element("ab" * n)) - n * base) < 1e-9


def test_four_point_defect_nonnegative(liouville):
    pts = [PlanePoint(z) for z in (1j, 1 + 1j, 2j, -1 + 3j)]
    rep = four_point_defect(liouville, *pts)
    assert rep.defect >= 0.0
    D = distance_matrix(liouville, pts)
    assert abs(defect_from_matrix(D, (0, 1, 2, 3)) - rep.defect) < 1e-12


def test_delta_liouville_log2(liouville):
    cert = delta_lower_bound_boxes(liouville)
    assert abs(cert.value - LOG2) < 1e-6
    assert not math.isfinite(cert.truncation_radius)


def test_delta_lamination_zero(lamination):
    cert = delta_lower_bound_boxes(lamination, R=2.5)
    assert cert.value == 0.0


def test_delta_ab_positive(torus, ab_current):
    cert = delta_lower_bound_boxes(ab_current, R=2.5)
    assert cert.value == 1.0
    assert cert.best_box is not None


def test_double_transversal_liouville(liouville):
    r = 6.0
    quad = tuple(geodesic_point(PlanePoint(1j), k * math.pi / 2 + 0.01, r) for k in range(4))
    val = double_transversal_value(liouville, *quad)
    assert val <= LOG2 + 1e-9
    assert delta_via_double_transversals(liouville, [quad]) == val
    assert val > LOG2 - 1e-2


def test_double_transversal_rejects_bad_position(liouville):
    p = [PlanePoint(1j), PlanePoint(1.001j), PlanePoint(1 + 1j), PlanePoint(2 + 1j)]
    with pytest.raises(NotConvexPosition):
        double_transversal_value(liouville, *p)


def test_filling_ball_probe_liouville_bounded(torus, liouville):
    out = filling_ball_probe(liouville, PlanePoint(1j), 1.0)
    assert "bounded_within" in out


def test_escape_ray_for_single_curve(torus):
    mu = AtomicCurrent.from_words(torus, [("b", 1.0)])
    out = filling_ball_probe(mu, PlanePoint(1j), 0.9, sample_rays=64, max_radius=4.0)
    # a single curve never fills; some direction stays cheap
    assert "escape_witness" in out


def test_sum_current_distance_additive(torus, liouville, ab_current):
    s = SumCurrent((liouville, ab_current))
    pts = sample_points(torus, 6, 3, spread=1.5)
    for p, q in zip(pts[:-1], pts[1:]):
        assert (
            abs(dual_distance(s, p, q) - dual_distance(liouville, p, q) - dual_distance(ab_current, p, q))
            < 1e-12
        )
