import math

import numpy as np
import pytest

from currentdual import (
    BoundaryPoint,
    Box,
    CoincidentPoints,
    Geodesic,
    Isometry,
    NotHyperbolic,
    PlanePoint,
    apply,
    axis,
    cross_ratio_log,
    hyp_distance,
    opposite_box,
    trace_translation_length,
)
from currentdual.hyperbolic import (
    Segment,
    axis_point,
    crosses,
    from_disk,
    geodesic_intersection,
    geodesic_point,
    segment_point,
    to_disk,
)


def test_isometry_sign_normalized():
    g = Isometry(np.array([[-1.0, 0.0], [0.0, -1.0]]))
    assert g.m[0, 0] > 0


def test_isometry_classify():
    assert Isometry(np.array([[2.0, 0.0], [0.0, 0.5]])).classify() == "hyperbolic"
    assert Isometry(np.array([[1.0, 1.0], [0.0, 1.0]])).classify() == "parabolic"
    assert Isometry(np.array([[0.0, -1.0], [1.0, 0.0]])).classify() == "elliptic"
    assert Isometry(np.eye(2)).classify() == "identity"


def test_isometry_inverse_composition():
    g = Isometry(np.array([[1.0, 1.0], [1.0, 2.0]]))
    h = g @ g.inverse()
    assert h.classify() == "identity"
    assert abs(np.linalg.det(h.m) - 1.0) < 1e-12


def test_plane_point_requires_upper_half_plane():
    with pytest.raises(ValueError):
        PlanePoint(complex(0.0, -1.0))


def test_boundary_point_round_trip():
    for x in (-3.0, -0.5, 0.0, 0.7, 12.0, math.inf):
        b = BoundaryPoint.from_real(x)
        back = b.to_real()
        if math.isinf(x):
            assert math.isinf(back)
        else:
            assert abs(back - x) < 1e-12


def test_hyp_distance_vertical_axis():
    assert abs(hyp_distance(PlanePoint(1j), PlanePoint(2j)) - math.log(2.0)) < 1e-12


def test_hyp_distance_invariant():
    g = Isometry(np.array([[1.0, 1.0], [1.0, 2.0]]))
    p, q = PlanePoint(0.3 + 0.8j), PlanePoint(-1.2 + 2.5j)
    assert abs(hyp_distance(apply(g, p), apply(g, q)) - hyp_distance(p, q)) < 1e-12


def test_geodesic_through_contains_its_points():
    p, q = PlanePoint(0.5 + 1.0j), PlanePoint(-2.0 + 0.5j)
    g = Geodesic.through(p, q)
    assert g.contains(p) and g.contains(q)


def test_geodesic_side_values_split():
    g = Geodesic.from_reals(-1.0, 1.0)
    inside = PlanePoint(0.0 + 0.5j)
    outside = PlanePoint(3.0 + 0.5j)
    assert g.side_value(inside.z) * g.side_value(outside.z) < 0


def test_crosses_interior_and_endpoint_flags():
    gamma = Geodesic.from_reals(-1.0, 1.0)
    a = PlanePoint(0.0 + 0.2j)
    b = PlanePoint(0.0 + 5.0j)
    assert crosses(gamma, Segment(a, b, True, True)) == "interior"
    on = PlanePoint(0.0 + 1.0j)  # apex of the unit semicircle
    assert crosses(gamma, Segment(on, b, True, False)) == "at_a"
    assert crosses(gamma, Segment(b, on, False, True)) == "at_b"
    assert crosses(gamma, Segment(b, PlanePoint(0.0 + 2.0j), True, True)) == "none"


def test_cross_ratio_log_square_is_log_two():
    t = [BoundaryPoint(k * math.pi / 2) for k in range(4)]
    assert abs(cross_ratio_log(t[0], t[1], t[2], t[3]) - math.log(2.0)) < 1e-12


def test_cross_ratio_log_rejects_coincident():
    a = BoundaryPoint(0.1)
    with pytest.raises(CoincidentPoints):
        cross_ratio_log(a, BoundaryPoint(0.1), BoundaryPoint(1.0), BoundaryPoint(2.0))


def test_opposite_box_partitions_circle():
    B = Box.from_angles(0.2, 1.1, 2.0, 3.5)
    Bp = opposite_box(B)
    assert len(B.corner_angles()) == 4
    # every angle in a gap lies in exactly one arc of B or B-perp
    arcs = [B.I, B.J, Bp.I, Bp.J]
    for theta in (0.6, 1.4, 2.9, 5.0):
        assert sum(1 for a in arcs if a.contains_angle(theta)) == 1


def test_axis_and_translation_length():
    g = Isometry(np.array([[2.0, 0.0], [0.0, 0.5]]))
    gamma = axis(g)
    u, v = gamma.reals()
    finite = min(u, v) if not (math.isinf(u) or math.isinf(v)) else (v if math.isinf(u) else u)
    assert abs(finite) < 1e-12
    assert math.isinf(u) or math.isinf(v)
    assert abs(trace_translation_length(g) - 2.0 * math.acosh(1.25)) < 1e-12


def test_translation_length_rejects_elliptic():
    with pytest.raises(NotHyperbolic):
        trace_translation_length(Isometry(np.array([[0.0, -1.0], [1.0, 0.0]])))


def test_geodesic_intersection_linking():
    g1 = Geodesic.from_reals(-1.0, 1.0)
    g2 = Geodesic.from_reals(0.0, math.inf)
    p = geodesic_intersection(g1, g2)
    assert p is not None
    assert abs(p.z - 1j) < 1e-9
    g3 = Geodesic.from_reals(2.0, 3.0)
    assert geodesic_intersection(g1, g3) is None


def test_disk_round_trip():
    z = 0.7 + 1.9j
    assert abs(from_disk(to_disk(z)) - z) < 1e-12


def test_segment_point_distances():
    p, q = PlanePoint(1j), PlanePoint(1.0 + 2.0j)
    total = hyp_distance(p, q)
    m = segment_point(p, q, 0.4 * total)
    assert abs(hyp_distance(p, m) - 0.4 * total) < 1e-9
    assert abs(hyp_distance(m, q) - 0.6 * total) < 1e-9


def test_geodesic_point_radial():
    x = geodesic_point(PlanePoint(1j), 0.3, 1.5)
    assert abs(hyp_distance(PlanePoint(1j), x) - 1.5) < 1e-9


def test_axis_point_lies_on_axis():
    g = Isometry(np.array([[1.0, 1.0], [1.0, 2.0]]))
    gamma = axis(g)
    assert gamma.contains(axis_point(gamma))
