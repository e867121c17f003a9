"""Upper half-plane primitives: isometries, boundary circle, geodesics, boxes.

Points live in the open upper half-plane as complex numbers. Boundary points
are stored as angles on the unit circle via the Cayley map z -> (z - i)/(z + i),
so counter-clockwise interval arithmetic never has to special-case infinity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentPoints, DegenerateSegment, NotHyperbolic

TAU_TRACE = 1e-9
TAU_ON = 1e-10
TAU_SEP = 1e-9

TWO_PI = 2.0 * math.pi


def _normalize_matrix(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det <= 0:
        raise ValueError(f"matrix must have positive determinant, got {det}")
    m = m / math.sqrt(det)
    for x in m.flat:
        if abs(x) > 1e-12:
            if x < 0:
                m = -m
            break
    return m


class Isometry:
    """A PSL(2,R) element: unit-determinant 2x2 real matrix, sign-normalized."""

    __slots__ = ("m",)

    def __init__(self, m):
        m = np.asarray(m, dtype=float).reshape(2, 2)
        self.m = _normalize_matrix(m)
        self.m.setflags(write=False)

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(np.eye(2))

    @property
    def trace(self) -> float:
        return self.m[0, 0] + self.m[1, 1]

    def classify(self) -> str:
        m = self.m
        if abs(m[0, 1]) < 1e-12 and abs(m[1, 0]) < 1e-12 and abs(m[0, 0] - m[1, 1]) < 1e-12:
            return "identity"
        t = abs(self.trace)
        if t > 2.0 + TAU_TRACE:
            return "hyperbolic"
        if t >= 2.0 - TAU_TRACE:
            return "parabolic"
        return "elliptic"

    def inverse(self) -> "Isometry":
        m = self.m
        return Isometry(np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]))

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.m @ other.m)

    def key(self, quantum: float = 1e-9) -> tuple:
        return tuple(np.round(self.m.flatten() / quantum).astype(np.int64))

    def __eq__(self, other) -> bool:
        return isinstance(other, Isometry) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        a, b, c, d = self.m.flat
        return f"Isometry([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"

    def apply_real(self, x: float) -> float:
        """Mobius action on the extended real line (math.inf allowed)."""
        a, b, c, d = self.m.flat
        if math.isinf(x):
            return a / c if abs(c) > 1e-300 else math.inf
        den = c * x + d
        if abs(den) < 1e-300:
            return math.inf
        return (a * x + b) / den

    def apply_complex(self, z: complex) -> complex:
        a, b, c, d = self.m.flat
        return (a * z + b) / (c * z + d)


@dataclass(frozen=True)
class PlanePoint:
    """A point of the upper half-plane."""

    z: complex

    def __post_init__(self):
        if not self.z.imag > 0:
            raise ValueError(f"point must have Im > 0, got {self.z}")

    @property
    def x(self) -> float:
        return self.z.real

    @property
    def y(self) -> float:
        return self.z.imag


@dataclass(frozen=True)
class BoundaryPoint:
    """A boundary-circle point, stored as an angle in [0, 2*pi).

    The angle is that of the Cayley image (x - i)/(x + i) of the extended-real
    coordinate x; infinity sits at angle 0.
    """

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", self.theta % TWO_PI)

    @classmethod
    def from_real(cls, x: float) -> "BoundaryPoint":
        if math.isinf(x):
            return cls(0.0)
        w = (x - 1j) / (x + 1j)
        return cls(cmath.phase(w))

    def to_real(self) -> float:
        half = self.theta / 2.0
        s = math.sin(half)
        if abs(s) < 1e-14:
            return math.inf
        return -math.cos(half) / s

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoundaryPoint):
            return NotImplemented
        return abs((self.theta - other.theta + math.pi) % TWO_PI - math.pi) <= TAU_SEP

    def __hash__(self) -> int:
        return 0  # equality is tolerance-based; hashing degenerates


def angle_gap(start: float, end: float) -> float:
    """Counter-clockwise angular distance from start to end, in [0, 2*pi)."""
    return (end - start) % TWO_PI


def apply(g: Isometry, p):
    """Mobius action on a PlanePoint or BoundaryPoint."""
    if isinstance(p, PlanePoint):
        return PlanePoint(g.apply_complex(p.z))
    if isinstance(p, BoundaryPoint):
        return BoundaryPoint.from_real(g.apply_real(p.to_real()))
    raise TypeError(f"cannot apply isometry to {type(p).__name__}")


def hyp_distance(p: PlanePoint, q: PlanePoint) -> float:
    dz = p.z - q.z
    arg = 1.0 + (dz.real * dz.real + dz.imag * dz.imag) / (2.0 * p.y * q.y)
    return math.acosh(max(arg, 1.0))


@dataclass(frozen=True)
class Geodesic:
    """Unoriented bi-infinite geodesic: an unordered pair of boundary points."""

    e1: BoundaryPoint
    e2: BoundaryPoint

    def __post_init__(self):
        gap = angle_gap(self.e1.theta, self.e2.theta)
        if min(gap, TWO_PI - gap) <= TAU_SEP:
            raise ValueError("degenerate geodesic: endpoints too close")

    @classmethod
    def from_reals(cls, u: float, v: float) -> "Geodesic":
        return cls(BoundaryPoint.from_real(u), BoundaryPoint.from_real(v))

    @classmethod
    def through(cls, p: PlanePoint, q: PlanePoint) -> "Geodesic":
        u, v = carrier_endpoints(p.z, q.z)
        return cls.from_reals(u, v)

    def reals(self) -> tuple:
        return self.e1.to_real(), self.e2.to_real()

    def side_value(self, z: complex) -> float:
        """Signed value whose arcsinh magnitude is the distance from z to the geodesic."""
        return _side_value(*self.reals(), z)

    def contains(self, p: PlanePoint, tol: float = TAU_ON) -> bool:
        return abs(math.asinh(self.side_value(p.z))) <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, Geodesic):
            return NotImplemented
        return (self.e1 == other.e1 and self.e2 == other.e2) or (
            self.e1 == other.e2 and self.e2 == other.e1
        )

    def __hash__(self) -> int:
        return 0


def carrier_endpoints(p: complex, q: complex) -> tuple:
    """Boundary endpoints (on the extended real line) of the geodesic through p, q."""
    if abs(p.real - q.real) < 1e-13 * max(1.0, abs(p), abs(q)):
        return p.real, math.inf
    c = (abs(p) ** 2 - abs(q) ** 2) / (2.0 * (p.real - q.real))
    r = abs(p - c)
    return c - r, c + r


def _side_value(u: float, v: float, z: complex) -> float:
    if math.isinf(u) or math.isinf(v):
        w = v if math.isinf(u) else u
        return (z.real - w) / z.imag
    c = 0.5 * (u + v)
    r = 0.5 * abs(u - v)
    dz = z - c
    return (dz.real * dz.real + dz.imag * dz.imag - r * r) / (2.0 * r * z.imag)


@dataclass(frozen=True)
class Segment:
    """Geodesic segment with endpoint-inclusion flags for half-open transversals."""

    a: PlanePoint
    b: PlanePoint
    include_a: bool = True
    include_b: bool = True

    def is_degenerate(self) -> bool:
        return hyp_distance(self.a, self.b) <= 1e-12

    def length(self) -> float:
        return hyp_distance(self.a, self.b)

    def carrier(self) -> Geodesic:
        return Geodesic.through(self.a, self.b)


def crosses(gamma: Geodesic, s: Segment) -> str:
    """Classify how gamma meets s: 'interior', 'at_a', 'at_b' or 'none'.

    A point within hyperbolic distance TAU_ON of gamma counts as lying on it.
    Endpoint-inclusion flags on s are deliberately ignored here; callers decide
    what an endpoint crossing is worth.
    """
    if s.is_degenerate():
        raise DegenerateSegment("crossing test needs a non-degenerate segment")
    u, v = gamma.reals()
    sa = _side_value(u, v, s.a.z)
    sb = _side_value(u, v, s.b.z)
    on_a = abs(math.asinh(sa)) <= TAU_ON
    on_b = abs(math.asinh(sb)) <= TAU_ON
    if on_a and on_b:
        return "none"  # segment runs along gamma: no transverse intersection
    if on_a:
        return "at_a"
    if on_b:
        return "at_b"
    if (sa > 0) != (sb > 0):
        return "interior"
    return "none"


@dataclass(frozen=True)
class BoundaryInterval:
    """Counter-clockwise boundary arc from start to end with inclusion flags."""

    start: BoundaryPoint
    end: BoundaryPoint
    include_start: bool = True
    include_end: bool = False

    def is_degenerate(self) -> bool:
        return angle_gap(self.start.theta, self.end.theta) <= 1e-15

    def __post_init__(self):
        if self.is_degenerate() and not (self.include_start and self.include_end):
            raise ValueError("degenerate interval must include its single point")

    def width(self) -> float:
        return angle_gap(self.start.theta, self.end.theta)

    def contains_angle(self, theta: float, tol: float = 0.0) -> bool:
        if self.is_degenerate():
            d = abs((theta - self.start.theta + math.pi) % TWO_PI - math.pi)
            return d <= max(tol, TAU_SEP)
        g = angle_gap(self.start.theta, theta)
        w = self.width()
        if g <= tol or g >= TWO_PI - tol:
            return self.include_start
        if abs(g - w) <= tol:
            return self.include_end
        return g < w

    def contains(self, p: BoundaryPoint, tol: float = 0.0) -> bool:
        return self.contains_angle(p.theta, tol)


@dataclass(frozen=True)
class Box:
    """Box of geodesics I x J: one endpoint in each of two disjoint arcs.

    Corners a, b, c, d = (I.start, I.end, J.start, J.end) occur in
    counter-clockwise order.
    """

    I: BoundaryInterval
    J: BoundaryInterval

    def __post_init__(self):
        a, b, c, d = self.corner_angles()
        ccw = (
            angle_gap(a, b) + angle_gap(b, c) + angle_gap(c, d) + angle_gap(d, a)
        )
        if abs(ccw - TWO_PI) > 1e-9:
            raise ValueError("box corners must occur counter-clockwise as a, b, c, d")
        if angle_gap(b, c) <= 0 or angle_gap(d, a) <= 0:
            raise ValueError("box interval closures must be disjoint")

    @classmethod
    def from_angles(cls, a, b, c, d, flags=(True, False, True, False)) -> "Box":
        ia, ib, ic, id_ = flags
        return cls(
            BoundaryInterval(BoundaryPoint(a), BoundaryPoint(b), ia, ib),
            BoundaryInterval(BoundaryPoint(c), BoundaryPoint(d), ic, id_),
        )

    def corner_angles(self) -> tuple:
        return (self.I.start.theta, self.I.end.theta, self.J.start.theta, self.J.end.theta)

    def min_corner_gap(self) -> float:
        a, b, c, d = self.corner_angles()
        return min(angle_gap(a, b), angle_gap(b, c), angle_gap(c, d), angle_gap(d, a))

    def gap_between_arcs(self) -> float:
        a, b, c, d = self.corner_angles()
        return min(angle_gap(b, c), angle_gap(d, a))


def box_contains(B: Box, gamma: Geodesic) -> bool:
    t1, t2 = gamma.e1.theta, gamma.e2.theta
    return (B.I.contains_angle(t1) and B.J.contains_angle(t2)) or (
        B.I.contains_angle(t2) and B.J.contains_angle(t1)
    )


def opposite_box(B: Box) -> Box:
    """B-perp = I_{d,a} x I_{b,c}, flags chosen so the four arcs partition the circle."""
    I, J = B.I, B.J
    return Box(
        BoundaryInterval(J.end, I.start, not J.include_end, not I.include_start),
        BoundaryInterval(I.end, J.start, not I.include_end, not J.include_start),
    )


def chord(t1: float, t2: float) -> float:
    return abs(math.sin(0.5 * (t1 - t2)))


def cross_ratio_log(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint, d: BoundaryPoint) -> float:
    """|log| of the projective cross-ratio of four boundary points.

    Computed from circle-chord lengths, which agree with the extended-real
    formula |a-c||b-d| / (|a-d||b-c|) by Mobius invariance, with no special
    case at infinity.
    """
    ts = [a.theta, b.theta, c.theta, d.theta]
    for i in range(4):
        for j in range(i + 1, 4):
            gap = abs((ts[i] - ts[j] + math.pi) % TWO_PI - math.pi)
            if gap < TAU_SEP:
                raise CoincidentPoints(f"boundary points {i} and {j} nearly coincide")
    num = chord(ts[0], ts[2]) * chord(ts[1], ts[3])
    den = chord(ts[0], ts[3]) * chord(ts[1], ts[2])
    return abs(math.log(num / den))


def axis(g: Isometry) -> Geodesic:
    """Axis of a hyperbolic isometry: the geodesic through its real fixed points."""
    if g.classify() != "hyperbolic":
        raise NotHyperbolic(f"axis needs |trace| > 2, got trace {g.trace}")
    a, b, c, d = g.m.flat
    if abs(c) < 1e-14:
        # fixes infinity and b / (d - a)
        return Geodesic.from_reals(b / (d - a), math.inf)
    disc = (d - a) ** 2 + 4.0 * b * c
    root = math.sqrt(disc)
    x1 = ((a - d) + root) / (2.0 * c)
    x2 = ((a - d) - root) / (2.0 * c)
    return Geodesic.from_reals(x1, x2)


def trace_translation_length(g: Isometry) -> float:
    if g.classify() != "hyperbolic":
        raise NotHyperbolic(f"translation length needs |trace| > 2, got {g.trace}")
    return 2.0 * math.acosh(abs(g.trace) / 2.0)


def axis_point(gamma: Geodesic) -> PlanePoint:
    """A reference point on a geodesic (its apex over the real line)."""
    u, v = gamma.reals()
    if math.isinf(u) or math.isinf(v):
        w = v if math.isinf(u) else u
        return PlanePoint(complex(w, 1.0))
    c = 0.5 * (u + v)
    r = 0.5 * abs(u - v)
    return PlanePoint(complex(c, r))


def distance_to_geodesic(p: PlanePoint, gamma: Geodesic) -> float:
    return abs(math.asinh(gamma.side_value(p.z)))


def geodesic_intersection(g1: Geodesic, g2: Geodesic) -> PlanePoint | None:
    """Intersection point of two geodesics in the upper half-plane, if any."""
    t = [g1.e1.theta, g1.e2.theta, g2.e1.theta, g2.e2.theta]
    # linking test: endpoints of g2 must separate those of g1 on the circle
    a, b = sorted((t[0], t[1]))
    in_arc = [a < x < b for x in (t[2], t[3])]
    if in_arc[0] == in_arc[1]:
        return None
    u1, v1 = g1.reals()
    u2, v2 = g2.reals()

    def circle(u, v):
        if math.isinf(u) or math.isinf(v):
            return (v if math.isinf(u) else u), None
        return 0.5 * (u + v), 0.5 * abs(u - v)

    c1, r1 = circle(u1, v1)
    c2, r2 = circle(u2, v2)
    if r1 is None and r2 is None:
        return None
    if r1 is None:
        x = c1
        y2 = r2 * r2 - (x - c2) ** 2
    elif r2 is None:
        x = c2
        y2 = r1 * r1 - (x - c1) ** 2
    else:
        x = (c1 * c1 - r1 * r1 - c2 * c2 + r2 * r2) / (2.0 * (c1 - c2))
        y2 = r1 * r1 - (x - c1) ** 2
    if y2 <= 0:
        return None
    return PlanePoint(complex(x, math.sqrt(y2)))


def to_disk(z: complex) -> complex:
    """Cayley map to the Poincare disk, i -> 0."""
    return (z - 1j) / (z + 1j)


def from_disk(w: complex) -> complex:
    return 1j * (1.0 + w) / (1.0 - w)


def geodesic_point(origin: PlanePoint, direction: float, t: float) -> PlanePoint:
    """Point at hyperbolic distance t from origin along the ray at disk-angle direction."""
    rho = math.tanh(0.5 * t)
    w = rho * cmath.exp(1j * direction)
    # move disk center to the Cayley image of origin
    w0 = to_disk(origin.z)
    moved = (w + w0) / (1.0 + w0.conjugate() * w)
    return PlanePoint(from_disk(moved))


def segment_point(p: PlanePoint, q: PlanePoint, t: float) -> PlanePoint:
    """Point at hyperbolic distance t from p along the segment toward q."""
    w0 = to_disk(p.z)
    wq = to_disk(q.z)
    u = (wq - w0) / (1.0 - w0.conjugate() * wq)
    direction = cmath.phase(u)
    return geodesic_point(p, direction, t)


def collinear_order(points) -> bool:
    """True if the points are listed in order along a common geodesic."""
    if len(points) < 3:
        return True
    for i in range(len(points) - 2):
        p, q, r = points[i], points[i + 1], points[i + 2]
        if abs(hyp_distance(p, r) - hyp_distance(p, q) - hyp_distance(q, r)) > 1e-9:
            return False
    return True
