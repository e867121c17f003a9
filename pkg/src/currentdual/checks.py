"""Verification suites: decomposition structure, chain distances, delta
inequalities, equivariant Gromov-Hausdorff probes, fixed points,
coboundedness. All checks are read-only and deterministic given a seed."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .currents import (
    AtomicCurrent,
    SumCurrent,
    box_measure,
    intersection_with_class,
    presentation_of,
    store_for,
    _mob,
)
from .dual_metric import delta_lower_bound_boxes, dual_distance, atomic_endpoint_angles
from .group import GroupElement, conjugacy_classes
from .hyperbolic import (
    Geodesic,
    PlanePoint,
    apply,
    axis,
    axis_point,
    geodesic_intersection,
    hyp_distance,
    opposite_box,
    segment_point,
    trace_translation_length,
)

CHAIN_TOL = 1e-9
FIXED_POINT_TOL = 1e-10


@dataclass(frozen=True)
class DecompositionSpec:
    """User-declared decomposition: subcurrents plus weighted special curves."""

    subcurrents: tuple  # of (GeodesicCurrent, declared type 1 or 3)
    special_curves: tuple  # of (GroupElement, weight >= 0)


@dataclass(frozen=True)
class EpsilonRelationReport:
    K: tuple
    P: tuple
    epsilon: float
    worst_distortion: float
    equivariance_ok: bool
    passed: bool


def decomposition_current(D: DecompositionSpec, pres) -> SumCurrent:
    """The current described by a decomposition spec, as a sum."""
    parts = [cur for cur, _ in D.subcurrents]
    for rep, w in D.special_curves:
        if w > 0:
            parts.append(AtomicCurrent(((rep, float(w)),), pres))
    return SumCurrent(tuple(parts))


def sample_points(pres, n: int, seed: int, spread: float = 2.0) -> list:
    """Deterministic points within hyperbolic distance spread of the basepoint."""
    rng = np.random.default_rng(seed)
    o = pres.basepoint
    out = []
    while len(out) < n:
        z = complex(rng.uniform(-4.0, 4.0), math.exp(rng.uniform(-1.6, 1.6)))
        p = PlanePoint(z)
        if hyp_distance(o, p) <= spread:
            out.append(p)
    return out


def verify_special_curves(mu, D: DecompositionSpec, word_bound: int) -> dict:
    """Check the defining properties of declared special curves up to a word bound.

    Each special s must have i(mu, s) = 0, and every enumerated class crossing
    s must also cross mu.
    """
    pres = presentation_of(mu)
    violations = []
    classes = conjugacy_classes(pres, word_bound)
    for s_rep, w in D.special_curves:
        i_mu_s = intersection_with_class(mu, s_rep)
        if abs(i_mu_s) > 1e-9:
            violations.append({"special": s_rep.word, "kind": "i(mu,s) != 0", "value": i_mu_s})
            continue
        s_cur = AtomicCurrent(((s_rep, 1.0),), pres)
        for c in classes:
            if c.matrix.classify() != "hyperbolic":
                continue
            ics = intersection_with_class(s_cur, c)
            if ics > 1e-9:
                imc = intersection_with_class(mu, c)
                if imc <= 1e-9:
                    violations.append(
                        {"special": s_rep.word, "kind": "crossing class misses mu", "class": c.word}
                    )
    return {"ok": not violations, "violations": violations, "word_bound": word_bound}


def _chain_points(mu, D: DecompositionSpec, x: PlanePoint, y: PlanePoint):
    """Crossing points of [x, y] with the special-curve lifts, ordered from x."""
    pres = presentation_of(mu)
    st = store_for(pres)
    carrier = Geodesic.through(x, y)
    span = hyp_distance(x, y)
    o = pres.basepoint
    Dneed = max(hyp_distance(o, x), hyp_distance(o, y)) + 0.1
    hits = []
    for s_rep, w in D.special_curves:
        ax_set = st.axes(s_rep, Dneed)
        sx = ax_set.side_values(x.z)
        sy = ax_set.side_values(y.z)
        crossed = np.nonzero((sx > 0) != (sy > 0))[0]
        for i in crossed:
            if ax_set.vert[i]:
                gamma = Geodesic.from_reals(float(ax_set.uu[i]), math.inf)
            else:
                gamma = Geodesic.from_reals(
                    float(ax_set.cc[i] - ax_set.rr[i]), float(ax_set.cc[i] + ax_set.rr[i])
                )
            p = geodesic_intersection(carrier, gamma)
            if p is None:
                continue
            t = hyp_distance(x, p)
            if 1e-9 < t < span - 1e-9:
                hits.append((t, p, w))
    hits.sort(key=lambda h: h[0])
    return hits


def verify_chain_distance(mu, D: DecompositionSpec, n_pairs: int = 200, seed: int = 0, spread: float = 2.0) -> dict:
    """Cross-region pairs: d_mu must equal the straight-chain sum.

    The chain walks the connecting geodesic, charging each region piece to its
    own subcurrent and each crossed special lift its weight.
    """
    pres = presentation_of(mu)
    subs = [cur for cur, _ in D.subcurrents]
    worst = 0.0
    checked = 0
    region_violations = 0
    attempts = 0
    pool: list = []
    while checked < n_pairs and attempts < 50 * n_pairs:
        if len(pool) < 2:
            pool = sample_points(pres, 4 * n_pairs, seed + 1 + attempts, spread)
        x, y = pool.pop(), pool.pop()
        attempts += 1
        hits = _chain_points(mu, D, x, y)
        if not hits:
            continue
        pts = [x] + [p for _, p, _ in hits] + [y]
        chain = sum(w for _, _, w in hits)
        for a, b in zip(pts[:-1], pts[1:]):
            vals = [dual_distance(sub, a, b) for sub in subs]
            if sum(1 for v in vals if v > 1e-9) > 1:
                region_violations += 1
            chain += sum(vals)
        direct = dual_distance(mu, x, y)
        worst = max(worst, abs(direct - chain))
        checked += 1
    return {
        "ok": worst <= CHAIN_TOL and region_violations == 0 and checked == n_pairs,
        "pairs": checked,
        "worst_error": worst,
        "region_violations": region_violations,
    }


def verify_piece_intersection(mu, D: DecompositionSpec, n_samples: int = 20, seed: int = 0) -> dict:
    """Points on a special lift are a single dual point, independent of its weight."""
    pres = presentation_of(mu)
    rng = np.random.default_rng(seed)
    worst = 0.0
    weight_effect = 0.0
    for s_rep, w in D.special_curves:
        gamma = axis(s_rep.matrix)
        ell = trace_translation_length(s_rep.matrix)
        base = axis_point(gamma)
        far = PlanePoint(_mob(tuple(s_rep.matrix.m.flat), base.z))
        # bumping the weight on s must not matter along its own lift
        bumped = decomposition_current(
            DecompositionSpec(
                D.subcurrents,
                tuple((r, ww + 5.0 if r.word == s_rep.word else ww) for r, ww in D.special_curves),
            ),
            pres,
        )
        for _ in range(n_samples):
            t1, t2 = sorted(rng.uniform(0.0, ell, size=2))
            if t2 - t1 < 1e-6:
                continue
            p = segment_point(base, far, t1)
            q = segment_point(base, far, t2)
            worst = max(worst, dual_distance(mu, p, q))
            weight_effect = max(weight_effect, dual_distance(bumped, p, q))
    return {"ok": worst <= FIXED_POINT_TOL and weight_effect <= FIXED_POINT_TOL, "worst": worst, "weight_effect": weight_effect}


def verify_delta_decomposition(mu, D: DecompositionSpec, R: float = 2.5) -> dict:
    """Certified-lower-bound version of the delta decomposition inequalities.

    All searches run at the same truncation radius over the shared candidate
    corner set derived from mu, so the bounds are comparable.
    """
    pres = presentation_of(mu)
    endpoints = atomic_endpoint_angles(mu, R)
    pieces = [cur for cur, _ in D.subcurrents]
    for s_rep, w in D.special_curves:
        if w > 0:
            pieces.append(AtomicCurrent(((s_rep, float(w)),), pres))
    piece_certs = [delta_lower_bound_boxes(p, R=R, endpoints=endpoints) for p in pieces]
    mu_cert = delta_lower_bound_boxes(mu, R=R, endpoints=endpoints)
    delta_mu = mu_cert.value
    # strengthen the mu bound with each piece's witness box
    for cert in piece_certs:
        delta_mu = max(
            delta_mu,
            min(box_measure(mu, cert.best_box), box_measure(mu, opposite_box(cert.best_box))),
        )
    piece_vals = [c.value for c in piece_certs]
    lower_ok = max(piece_vals) <= delta_mu + 1e-9
    upper_ok = delta_mu <= sum(piece_vals) + 1e-9
    return {
        "ok": lower_ok,
        "lower_ok": lower_ok,
        "upper_ok": upper_ok,
        "delta_mu": delta_mu,
        "delta_pieces": piece_vals,
        "radius": R,
    }


def gh_epsilon_related(mu, mu2, K, P, epsilon: float) -> EpsilonRelationReport:
    """Finite equivariant GH check with the identity relation on representatives."""
    worst = 0.0
    n = len(K)
    for i in range(n):
        for j in range(i + 1, n):
            worst = max(worst, abs(dual_distance(mu, K[i], K[j]) - dual_distance(mu2, K[i], K[j])))
    eq_ok = True
    for g in P:
        gK = [apply(g.matrix, p) for p in K]
        for i in range(n):
            for j in range(i + 1, n):
                d1 = dual_distance(mu, gK[i], gK[j])
                d2 = dual_distance(mu2, gK[i], gK[j])
                if abs(d1 - d2) >= epsilon:
                    eq_ok = False
    return EpsilonRelationReport(
        K=tuple(K),
        P=tuple(P),
        epsilon=epsilon,
        worst_distortion=worst,
        equivariance_ok=eq_ok,
        passed=worst < epsilon and eq_ok,
    )


def fixed_point_probe(mu, g: GroupElement, samples: int = 7) -> dict:
    """Search the axis of g for a point with d_mu(x, gx) = 0."""
    gamma = axis(g.matrix)
    base = axis_point(gamma)
    gm = tuple(g.matrix.m.flat)
    far = PlanePoint(_mob(gm, base.z))
    ell = hyp_distance(base, far)
    for k in range(samples):
        x = segment_point(base, far, ell * k / samples) if k else base
        gx = PlanePoint(_mob(gm, x.z))
        if dual_distance(mu, x, gx) <= FIXED_POINT_TOL:
            return {"fixed_witness": x}
    return {"fixed_witness": None}


def coboundedness_probe(mu, points, base_radius_guess: float = 2.0) -> float:
    """Empirical cobounding radius: pull each point home, measure d_mu to base."""
    if not points:
        raise ValueError("need at least one sample point")
    pres = presentation_of(mu)
    st = store_for(pres)
    o = pres.basepoint
    worst = 0.0
    for p in points:
        g = st.pull(p.z)
        moved = PlanePoint(_mob(g, p.z))
        worst = max(worst, dual_distance(mu, o, moved))
    return max(worst, 0.0)
