"""Geodesic currents and their measures on boxes, transversals and pencils.

Three representable kinds: atomic currents (weighted multi-curves), the
Liouville current, and finite sums. Atomic measures are exact weighted counts
over certified finite sets of axis translates; Liouville measures come from
closed formulas (cross-ratio on boxes, hyperbolic length on transversals).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSegment,
    NonCompactBox,
    NotHyperbolic,
)
from .group import GroupElement, SurfacePresentation, cyclic_reduce, conjugacy_classes
from .hyperbolic import (
    TAU_ON,
    TAU_SEP,
    TWO_PI,
    BoundaryInterval,
    BoundaryPoint,
    Box,
    Geodesic,
    PlanePoint,
    Segment,
    angle_gap,
    axis,
    axis_point,
    cross_ratio_log,
    distance_to_geodesic,
    geodesic_intersection,
    hyp_distance,
    segment_point,
    to_disk,
    trace_translation_length,
)

PIECE_LENGTH = 2.0


@dataclass(frozen=True)
class AtomicCurrent:
    """Weighted multi-curve: finite list of (conjugacy class, weight > 0)."""

    components: tuple  # of (GroupElement canonical, float weight)
    presentation: SurfacePresentation

    def __post_init__(self):
        seen = set()
        for rep, w in self.components:
            if w <= 0:
                raise ValueError(f"weight must be positive, got {w}")
            if rep.word in seen:
                raise ValueError(f"duplicate component {rep.word}")
            seen.add(rep.word)

    @classmethod
    def from_words(cls, pres: SurfacePresentation, items) -> "AtomicCurrent":
        comps = []
        for word, w in items:
            comps.append((cyclic_reduce(pres, pres.element(word)), float(w)))
        return cls(tuple(comps), pres)


@dataclass(frozen=True)
class LiouvilleCurrent:
    """The cross-ratio current; its dual is the hyperbolic plane rescaled."""

    presentation: SurfacePresentation
    scale: float = 1.0

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class SumCurrent:
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise ValueError("sum current needs at least one part")


GeodesicCurrent = (AtomicCurrent, LiouvilleCurrent, SumCurrent)


@dataclass(frozen=True)
class TransversalSpec:
    segment: Segment


def flatten(mu) -> list:
    """Flatten nested sums into a list of atomic / Liouville leaves."""
    if isinstance(mu, SumCurrent):
        out = []
        for p in mu.parts:
            out.extend(flatten(p))
        return out
    return [mu]


def presentation_of(mu) -> SurfacePresentation:
    leaf = flatten(mu)[0]
    return leaf.presentation


def scale_current(mu, factor: float):
    """The current factor * mu (weights / scale multiplied)."""
    if isinstance(mu, SumCurrent):
        return SumCurrent(tuple(scale_current(p, factor) for p in mu.parts))
    if isinstance(mu, LiouvilleCurrent):
        return LiouvilleCurrent(mu.presentation, mu.scale * factor)
    return AtomicCurrent(tuple((rep, w * factor) for rep, w in mu.components), mu.presentation)


def load_current(source, pres: SurfacePresentation):
    """Load a current spec: { kind: atomic|liouville|sum, components, scale }."""
    if isinstance(source, str):
        with open(source) as fh:
            cfg = json.load(fh)
    else:
        cfg = source
    kind = cfg.get("kind", "atomic")
    if kind == "liouville":
        return LiouvilleCurrent(pres, float(cfg.get("scale", 1.0)))
    if kind == "atomic":
        comps = [(c["word"], c.get("weight", 1.0)) for c in cfg["components"]]
        return AtomicCurrent.from_words(pres, comps)
    if kind == "sum":
        return SumCurrent(tuple(load_current(part, pres) for part in cfg["parts"]))
    raise ValueError(f"unknown current kind {kind!r}")


# ---------------------------------------------------------------------------
# Fast orbit / translate machinery (raw 2x2 tuples, cached per presentation).
# ---------------------------------------------------------------------------


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _inv(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def _mob(m, z: complex) -> complex:
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def _mob_real(m, x: float) -> float:
    a, b, c, d = m
    if math.isinf(x):
        return a / c if abs(c) > 1e-300 else math.inf
    den = c * x + d
    if abs(den) < 1e-300:
        return math.inf
    return (a * x + b) / den


def _disp(m, o: complex) -> float:
    z = _mob(m, o)
    dz = z - o
    arg = 1.0 + (dz.real * dz.real + dz.imag * dz.imag) / (2.0 * z.imag * o.imag)
    return math.acosh(max(arg, 1.0))


def _sign_key(m, quantum: float = 1e-9):
    for x in m:
        if abs(x) > 1e-12:
            if x < 0:
                m = (-m[0], -m[1], -m[2], -m[3])
            break
    return (round(m[0] / quantum), round(m[1] / quantum), round(m[2] / quantum), round(m[3] / quantum))


def _angle_of_real(x: float) -> float:
    if math.isinf(x):
        return 0.0
    return cmath.phase((x - 1j) / (x + 1j)) % TWO_PI


class _AxisSet:
    """Numpy view of a set of axis translates of one component."""

    __slots__ = ("n", "vert", "cc", "rr", "uu", "th1", "th2", "words", "dist")

    def __init__(self, endpoint_pairs, words, o: complex):
        self.n = len(endpoint_pairs)
        self.words = words
        vert = np.zeros(self.n, dtype=bool)
        cc = np.zeros(self.n)
        rr = np.ones(self.n)
        uu = np.zeros(self.n)
        th1 = np.zeros(self.n)
        th2 = np.zeros(self.n)
        for i, (u, v) in enumerate(endpoint_pairs):
            th1[i] = _angle_of_real(u)
            th2[i] = _angle_of_real(v)
            if math.isinf(u) or math.isinf(v):
                vert[i] = True
                uu[i] = v if math.isinf(u) else u
            else:
                cc[i] = 0.5 * (u + v)
                rr[i] = 0.5 * abs(u - v)
        self.vert, self.cc, self.rr, self.uu, self.th1, self.th2 = vert, cc, rr, uu, th1, th2
        self.dist = np.arcsinh(np.abs(self.side_values(o)))

    def subset(self, mask: np.ndarray) -> "_AxisSet":
        out = object.__new__(_AxisSet)
        out.n = int(mask.sum())
        out.words = [w for w, keep in zip(self.words, mask) if keep]
        for name in ("vert", "cc", "rr", "uu", "th1", "th2", "dist"):
            setattr(out, name, getattr(self, name)[mask])
        return out

    def side_values(self, z: complex) -> np.ndarray:
        x, y = z.real, z.imag
        dxc = x - self.cc
        fin = (dxc * dxc + y * y - self.rr * self.rr) / (2.0 * self.rr * y)
        return np.where(self.vert, (x - self.uu) / y, fin)

    def side_matrix(self, zs: np.ndarray) -> np.ndarray:
        x = zs.real[:, None]
        y = zs.imag[:, None]
        dxc = x - self.cc[None, :]
        fin = (dxc * dxc + y * y - self.rr[None, :] ** 2) / (2.0 * self.rr[None, :] * y)
        return np.where(self.vert[None, :], (x - self.uu[None, :]) / y, fin)


class TranslateStore:
    """Per-presentation cache: orbit balls and axis-translate sets.

    Radii only ever grow; a request below the cached radius reuses the cache.
    """

    def __init__(self, pres: SurfacePresentation):
        self.pres = pres
        self.o = pres.basepoint.z
        self.margin = pres.max_generator_displacement()
        self.letters = pres.letters()
        self.letter_mats = {ch: tuple(pres.generators[ch].m.flat) for ch in self.letters}
        self._inv_letter = {ch: (ch.lower() if ch.isupper() else ch.upper()) for ch in self.letters}
        self._ball_R = -1.0
        self._ball = []
        self._axes = {}

    def ball(self, R: float) -> list:
        """List of (word, matrix tuple) with displacement <= R."""
        if R > self._ball_R:
            self._build_ball(R + 0.5)
        return [(w, m) for w, m, d in self._ball if d <= R + 1e-9]

    def _build_ball(self, R: float):
        o = self.o
        ident = ("", (1.0, 0.0, 0.0, 1.0))
        seen = {_sign_key(ident[1])}
        out = [(ident[0], ident[1], 0.0)]
        frontier = [ident]
        lim = R + self.margin
        while frontier:
            nxt = []
            for word, m in frontier:
                last = word[-1] if word else ""
                for ch in self.letters:
                    if last and ch == self._inv_letter[last]:
                        continue
                    mm = _mul(m, self.letter_mats[ch])
                    key = _sign_key(mm)
                    if key in seen:
                        continue
                    seen.add(key)
                    d = _disp(mm, o)
                    if d > lim:
                        continue
                    nxt.append((word + ch, mm))
                    out.append((word + ch, mm, d))
            frontier = nxt
        self._ball = out
        self._ball_R = R

    def axes(self, rep: GroupElement, D: float) -> _AxisSet:
        """All distinct translates of axis(rep) passing within distance D of the basepoint."""
        entry = self._axes.get(rep.word)
        base = axis(rep.matrix)
        if entry is None:
            # any translate passing within D of the basepoint has a coset
            # representative with displacement <= D + d(o, axis) + ell/2
            offset = (
                distance_to_geodesic(self.pres.basepoint, base)
                + 0.5 * trace_translation_length(rep.matrix)
                + 0.3
            )
            entry = {"offset": offset, "covered": -1.0, "set": None, "views": {}}
            self._axes[rep.word] = entry
        if D > entry["covered"]:
            D_build = D * 1.05 + 0.3
            u0, v0 = base.reals()
            pairs = []
            words = []
            seen = set()
            for word, m in self.ball(D_build + entry["offset"]):
                u = _mob_real(m, u0)
                v = _mob_real(m, v0)
                a1 = _angle_of_real(u)
                a2 = _angle_of_real(v)
                key = (round(min(a1, a2) * 1e7), round(max(a1, a2) * 1e7))
                if key in seen:
                    continue
                seen.add(key)
                pairs.append((u, v))
                words.append(word)
            entry["set"] = _AxisSet(pairs, words, self.o)
            entry["covered"] = D_build
            entry["views"] = {}
        vk = round(D, 6)
        view = entry["views"].get(vk)
        if view is None:
            view = entry["set"].subset(entry["set"].dist <= D + 1e-9)
            entry["views"][vk] = view
        return view

    def pull(self, z: complex):
        """Greedy word moving z as close to the basepoint as single letters allow.

        Returns the raw matrix tuple of the pulling isometry.
        """
        g = (1.0, 0.0, 0.0, 1.0)
        cur = z
        o = self.o

        def dist(w):
            dz = w - o
            return math.acosh(max(1.0, 1.0 + (dz.real ** 2 + dz.imag ** 2) / (2.0 * w.imag * o.imag)))

        best = dist(cur)
        improved = True
        while improved:
            improved = False
            for ch in self.letters:
                m = self.letter_mats[ch]
                cand = _mob(m, cur)
                d = dist(cand)
                if d < best - 1e-12:
                    best = d
                    cur = cand
                    g = _mul(m, g)
                    improved = True
                    break
        return g


_STORES: dict = {}


def store_for(pres: SurfacePresentation) -> TranslateStore:
    st = _STORES.get(id(pres))
    if st is None:
        st = TranslateStore(pres)
        _STORES[id(pres)] = st
    return st


# ---------------------------------------------------------------------------
# Segment measures.
# ---------------------------------------------------------------------------


def _piece_points(p: complex, q: complex) -> list:
    pa, pb = PlanePoint(p), PlanePoint(q)
    L = hyp_distance(pa, pb)
    n = max(1, int(math.ceil(L / PIECE_LENGTH)))
    pts = [p]
    for k in range(1, n):
        pts.append(segment_point(pa, pb, L * k / n).z)
    pts.append(q)
    return pts


def _crossing_terms(sp: np.ndarray, sq: np.ndarray):
    on_p = np.abs(sp) <= TAU_ON
    on_q = np.abs(sq) <= TAU_ON
    interior = (~on_p) & (~on_q) & ((sp > 0) != (sq > 0))
    return interior, on_p & ~on_q, on_q & ~on_p


def atomic_segment_value(mu: AtomicCurrent, p: complex, q: complex, wa: float, wb: float) -> float:
    """Weighted crossing count over the segment [p, q].

    Crossings in the interior count fully; a crossing exactly at p counts with
    weight wa, at q with weight wb. Long segments are split into short pieces,
    each pulled near the basepoint by an isometry, so the translate cache stays
    small regardless of where the segment sits.
    """
    st = store_for(mu.presentation)
    pts = _piece_points(p, q)
    o = PlanePoint(st.o)
    total = 0.0
    for j in range(len(pts) - 1):
        g = st.pull(pts[j])
        z0 = _mob(g, pts[j])
        z1 = _mob(g, pts[j + 1])
        D = max(hyp_distance(o, PlanePoint(z0)), hyp_distance(o, PlanePoint(z1))) + 0.1
        alpha = wa if j == 0 else 1.0
        beta = wb if j == len(pts) - 2 else 0.0
        for rep, w in mu.components:
            ax = st.axes(rep, D)
            sp = ax.side_values(z0)
            sq = ax.side_values(z1)
            interior, at_a, at_b = _crossing_terms(sp, sq)
            total += w * (interior.sum() + alpha * at_a.sum() + beta * at_b.sum())
    return total


def transversal_measure(mu, t) -> float:
    """Current measure of the set of geodesics crossing a segment.

    Endpoint crossings count only when the matching inclusion flag is set.
    """
    if isinstance(t, TransversalSpec):
        t = t.segment
    if t.is_degenerate():
        raise DegenerateSegment("transversal needs distinct endpoints; use point_transversal_measure")
    total = 0.0
    for leaf in flatten(mu):
        if isinstance(leaf, LiouvilleCurrent):
            total += leaf.scale * hyp_distance(t.a, t.b)
        else:
            total += atomic_segment_value(
                leaf, t.a.z, t.b.z, 1.0 if t.include_a else 0.0, 1.0 if t.include_b else 0.0
            )
    return total


def point_transversal_measure(mu, x: PlanePoint) -> float:
    """Measure of the singleton transversal: all support geodesics through x."""
    total = 0.0
    for leaf in flatten(mu):
        if isinstance(leaf, LiouvilleCurrent):
            continue
        st = store_for(leaf.presentation)
        g = st.pull(x.z)
        z = _mob(g, x.z)
        D = hyp_distance(PlanePoint(st.o), PlanePoint(z)) + 0.1
        for rep, w in leaf.components:
            ax = st.axes(rep, D)
            total += w * (np.abs(ax.side_values(z)) <= TAU_ON).sum()
    return total


def has_atom(mu, gamma: Geodesic) -> float:
    """Total atom mass the current puts on a single geodesic."""
    total = 0.0
    t1 = gamma.e1.theta
    t2 = gamma.e2.theta
    for leaf in flatten(mu):
        if isinstance(leaf, LiouvilleCurrent):
            continue
        st = store_for(leaf.presentation)
        D = distance_to_geodesic(leaf.presentation.basepoint, gamma) + 0.1
        for rep, w in leaf.components:
            ax = st.axes(rep, D)
            for i in range(ax.n):
                if _close_angle(ax.th1[i], t1) and _close_angle(ax.th2[i], t2):
                    total += w
                elif _close_angle(ax.th1[i], t2) and _close_angle(ax.th2[i], t1):
                    total += w
    return total


def _close_angle(a: float, b: float, tol: float = TAU_SEP) -> bool:
    return abs((a - b + math.pi) % TWO_PI - math.pi) <= tol


def pencil_measure(mu, z: BoundaryPoint, arc: BoundaryInterval, radius: float = 8.0) -> float:
    """Atom mass of geodesics from z into the arc, within the enumeration radius."""
    if arc.contains(z):
        raise ValueError("pencil point must lie outside the arc")
    total = 0.0
    for leaf in flatten(mu):
        if isinstance(leaf, LiouvilleCurrent):
            continue
        st = store_for(leaf.presentation)
        for rep, w in leaf.components:
            ax = st.axes(rep, radius)
            for i in range(ax.n):
                if _close_angle(ax.th1[i], z.theta) and arc.contains_angle(ax.th2[i]):
                    total += w
                elif _close_angle(ax.th2[i], z.theta) and arc.contains_angle(ax.th1[i]):
                    total += w
    return total


# ---------------------------------------------------------------------------
# Box measures.
# ---------------------------------------------------------------------------


def box_core_distance(B: Box) -> tuple:
    """(center point m, reach D) such that every geodesic in B passes within D of m."""
    a, b, c, d = (BoundaryPoint(t) for t in B.corner_angles())
    diag1 = Geodesic(a, c)
    diag2 = Geodesic(b, d)
    m = geodesic_intersection(diag1, diag2)
    if m is None:
        raise NonCompactBox("box diagonals do not meet; corners are not in convex position")
    w0 = to_disk(m.z)

    def moved(theta: float) -> float:
        w = cmath.exp(1j * theta)
        return cmath.phase((w - w0) / (1.0 - w0.conjugate() * w)) % TWO_PI

    ta, tb, tc, td = (moved(t) for t in B.corner_angles())
    gap = min(angle_gap(tb, tc), angle_gap(td, ta))
    if gap <= TAU_SEP:
        raise NonCompactBox("box interval closures touch")
    D = math.atanh(min(math.cos(gap / 2.0), 1.0 - 1e-16))
    return m, D


def _arc_contains(theta: float, start: float, end: float, inc_s: bool, inc_e: bool) -> bool:
    g = angle_gap(start, theta)
    w = angle_gap(start, end)
    if g <= TAU_SEP or g >= TWO_PI - TAU_SEP:
        return inc_s
    if abs(g - w) <= TAU_SEP:
        return inc_e
    return g < w


def box_measure(mu, B: Box) -> float:
    """Current measure of a box of geodesics.

    Liouville: the log cross-ratio of the corners. Atomic: exact weighted count
    of axis translates inside the box, certified through the compact box core.
    """
    total = 0.0
    for leaf in flatten(mu):
        if isinstance(leaf, LiouvilleCurrent):
            a, b, c, d = B.corner_angles()
            total += leaf.scale * cross_ratio_log(
                BoundaryPoint(a), BoundaryPoint(b), BoundaryPoint(c), BoundaryPoint(d)
            )
            continue
        if B.gap_between_arcs() <= TAU_SEP:
            raise NonCompactBox("box interval closures touch")
        m, D_core = box_core_distance(B)
        st = store_for(leaf.presentation)
        D = hyp_distance(leaf.presentation.basepoint, m) + D_core + 0.1
        Ia, Ib = B.I.start.theta, B.I.end.theta
        Ja, Jb = B.J.start.theta, B.J.end.theta
        fi = (B.I.include_start, B.I.include_end)
        fj = (B.J.include_start, B.J.include_end)
        for rep, w in leaf.components:
            ax = st.axes(rep, D)
            for i in range(ax.n):
                t1, t2 = ax.th1[i], ax.th2[i]
                if (_arc_contains(t1, Ia, Ib, *fi) and _arc_contains(t2, Ja, Jb, *fj)) or (
                    _arc_contains(t2, Ia, Ib, *fi) and _arc_contains(t1, Ja, Jb, *fj)
                ):
                    total += w
    return total


# ---------------------------------------------------------------------------
# Intersection numbers, lengths, systole.
# ---------------------------------------------------------------------------


def _axis_base_point(rep: GroupElement) -> complex:
    """A slightly offset (hence generic) point on the axis of rep."""
    ax = axis(rep.matrix)
    x0 = axis_point(ax)
    x1 = PlanePoint(_mob(tuple(rep.matrix.m.flat), x0.z))
    return segment_point(x0, x1, min(0.1234, 0.5 * hyp_distance(x0, x1))).z


def geometric_crossing_number(c1: GroupElement, c2_current: AtomicCurrent) -> float:
    """Weighted count of c2 axis translates crossing a fundamental segment of c1.

    The fundamental segment is half-open: [x, c1 x). A translate equal to the
    axis of c1 itself never counts (no transverse crossing).
    """
    x = _axis_base_point(c1)
    gx = _mob(tuple(c1.matrix.m.flat), x)
    return atomic_segment_value(c2_current, x, gx, 1.0, 0.0)


def intersection_number(mu: AtomicCurrent, nu: AtomicCurrent) -> float:
    """Geometric intersection number of two atomic currents."""
    total = 0.0
    for rep1, w1 in mu.components:
        for rep2, w2 in nu.components:
            single = AtomicCurrent(((rep2, 1.0),), nu.presentation)
            n = geometric_crossing_number(rep1, single)
            total += w1 * w2 * n
    return total


def intersection_with_length(mu: LiouvilleCurrent, c: GroupElement) -> float:
    """i(Liouville, c) = scale times the hyperbolic translation length of c."""
    if c.matrix.classify() != "hyperbolic":
        raise NotHyperbolic(f"element {c.word!r} is not hyperbolic")
    return mu.scale * trace_translation_length(c.matrix)


def intersection_with_class(mu, c: GroupElement) -> float:
    """i(mu, c) for a single unoriented class c, summing over the parts of mu."""
    total = 0.0
    for leaf in flatten(mu):
        if isinstance(leaf, LiouvilleCurrent):
            total += intersection_with_length(leaf, c)
        else:
            single = AtomicCurrent(((cyclic_reduce(leaf.presentation, c), 1.0),), leaf.presentation)
            total += intersection_number(single, leaf)
    return total


def systole_estimate(mu, word_bound: int):
    """Min of i(mu, c) over classes up to the word bound: an upper bound on sys(mu)."""
    if word_bound < 1:
        raise ValueError("word bound must be at least 1")
    pres = presentation_of(mu)
    best = None
    best_c = None
    for c in conjugacy_classes(pres, word_bound):
        if c.matrix.classify() != "hyperbolic":
            continue
        val = intersection_with_class(mu, c)
        if best is None or val < best:
            best, best_c = val, c
            if best == 0.0:
                break
    return best, best_c
