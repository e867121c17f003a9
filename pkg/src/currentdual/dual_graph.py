"""Geometric realization of the dual space of an atomic current.

The axis arrangement is truncated to a hyperbolic window around the basepoint
and computed in the Klein model, where geodesics are straight chords, so face
extraction can lean on planar-geometry code. Rendering maps back to the
Poincare disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from shapely.geometry import LineString, Point, Polygon
from shapely.ops import polygonize, unary_union

from .currents import AtomicCurrent, intersection_number, store_for
from .dual_metric import dual_distance
from .errors import Disconnected
from .hyperbolic import (
    Geodesic,
    PlanePoint,
    from_disk,
    geodesic_intersection,
    hyp_distance,
    to_disk,
)

_EPS = 1e-9
_CIRCLE_SEGMENTS = 720


def _klein_of_plane(z: complex) -> complex:
    w = to_disk(z)
    return 2.0 * w / (1.0 + abs(w) ** 2)


def _plane_of_klein(k: complex) -> complex:
    w = k / (1.0 + math.sqrt(max(0.0, 1.0 - abs(k) ** 2)))
    return from_disk(w)


def _poincare_of_klein(k: complex) -> complex:
    return k / (1.0 + math.sqrt(max(0.0, 1.0 - abs(k) ** 2)))


@dataclass
class ArrangementAxis:
    geodesic: Geodesic
    component: int
    weight: float
    k1: complex  # Klein chord endpoints on the unit circle
    k2: complex


@dataclass
class Crossing:
    axis1: int
    axis2: int
    point: PlanePoint
    klein: complex


@dataclass
class Arrangement:
    current: AtomicCurrent
    window_radius: float
    axes: list
    crossings: list
    crossing_free: bool


@dataclass
class DualClass:
    kind: str  # region | axis_segment | axis_ray_or_line | crossing_point
    representative: PlanePoint
    truncated: bool
    axis: int | None = None
    crossing: int | None = None
    geometry: object = None
    index: int = -1


@dataclass
class DualGraph:
    nodes: list
    edges: list  # (i, j, length)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for n in self.nodes:
            g.add_node(n.index, kind=n.kind, truncated=n.truncated)
        for i, j, ln in self.edges:
            g.add_edge(i, j, weight=ln)
        return g

    def export(self) -> dict:
        return {
            "nodes": [{"id": n.index, "kind": n.kind, "truncated": n.truncated} for n in self.nodes],
            "edges": [{"a": i, "b": j, "len": ln} for i, j, ln in self.edges],
        }


def build_arrangement(mu: AtomicCurrent, R_w: float) -> Arrangement:
    """All support axis translates meeting the window, plus their crossings."""
    if R_w <= 0:
        raise ValueError("window radius must be positive")
    st = store_for(mu.presentation)
    axes = []
    for ci, (rep, w) in enumerate(mu.components):
        s = st.axes(rep, R_w)
        for i in range(s.n):
            gamma = Geodesic(
                _bp(s.th1[i]),
                _bp(s.th2[i]),
            )
            k1 = complex(math.cos(s.th1[i]), math.sin(s.th1[i]))
            k2 = complex(math.cos(s.th2[i]), math.sin(s.th2[i]))
            axes.append(ArrangementAxis(gamma, ci, w, k1, k2))
    o = mu.presentation.basepoint
    crossings = []
    for i in range(len(axes)):
        for j in range(i + 1, len(axes)):
            p = geodesic_intersection(axes[i].geodesic, axes[j].geodesic)
            if p is not None and hyp_distance(o, p) <= R_w:
                crossings.append(Crossing(i, j, p, _klein_of_plane(p.z)))
    free = True
    comps = [AtomicCurrent(((rep, 1.0),), mu.presentation) for rep, _ in mu.components]
    for a in range(len(comps)):
        for b in range(a, len(comps)):
            if intersection_number(comps[a], comps[b]) > 0:
                free = False
    return Arrangement(mu, R_w, axes, crossings, free)


def _bp(theta: float):
    from .hyperbolic import BoundaryPoint

    return BoundaryPoint(float(theta))


def _clip_chord(ax: ArrangementAxis, rw: float):
    """Intersection of the Klein chord with the window circle of radius rw."""
    k0, k1 = ax.k1, ax.k2
    d = k1 - k0
    a = abs(d) ** 2
    b = 2.0 * (k0.real * d.real + k0.imag * d.imag)
    c = abs(k0) ** 2 - rw * rw
    disc = b * b - 4.0 * a * c
    if disc <= 0:
        return None
    root = math.sqrt(disc)
    t0 = (-b - root) / (2.0 * a)
    t1 = (-b + root) / (2.0 * a)
    if t1 <= 0 or t0 >= 1:
        return None
    return k0 + t0 * d, k0 + t1 * d


def _window_polygon(rw: float, cut_points) -> Polygon:
    """Circle polygon whose vertex set includes the exact chord cut points.

    Sharing vertices with the chords keeps the linework noded, so polygonize
    sees clean rings.
    """
    verts = {}
    for k in range(_CIRCLE_SEGMENTS):
        phi = 2 * math.pi * k / _CIRCLE_SEGMENTS
        verts[phi] = (rw * math.cos(phi), rw * math.sin(phi))
    for p in cut_points:
        phi = math.atan2(p.imag, p.real) % (2 * math.pi)
        verts[phi] = (p.real, p.imag)
    ordered = [verts[phi] for phi in sorted(verts)]
    return Polygon(ordered)


def quotient_classes(A: Arrangement) -> list:
    """Zero-distance classes of the truncated arrangement.

    Faces become regions; axis pieces between consecutive crossings become
    segments; axes without crossings become rays/lines; crossings become
    points. Classes cut off by the window carry the truncated flag.
    """
    rw = math.tanh(A.window_radius)
    clips = [_clip_chord(ax, rw) for ax in A.axes]
    window = _window_polygon(rw, [p for cl in clips if cl for p in cl])
    classes = []

    for idx, cr in enumerate(A.crossings):
        classes.append(
            DualClass("crossing_point", cr.point, truncated=False, crossing=idx, geometry=cr.klein)
        )

    chords = []
    for ai, ax in enumerate(A.axes):
        if clips[ai] is None:
            continue
        k0, k1 = clips[ai]
        chords.append(LineString([(k0.real, k0.imag), (k1.real, k1.imag)]))
        direction = k1 - k0
        span = abs(direction) ** 2
        cuts = []
        for cidx, cr in enumerate(A.crossings):
            if cr.axis1 == ai or cr.axis2 == ai:
                t = ((cr.klein - k0) * direction.conjugate()).real / span
                cuts.append((t, cidx))
        cuts.sort()
        if not cuts:
            rep = _plane_of_klein((k0 + k1) / 2.0)
            classes.append(
                DualClass(
                    "axis_ray_or_line",
                    PlanePoint(rep),
                    truncated=not A.crossing_free,
                    axis=ai,
                    geometry=(k0, k1),
                )
            )
            continue
        bounds = [(0.0, None)] + cuts + [(1.0, None)]
        for (t0, c0), (t1, c1) in zip(bounds[:-1], bounds[1:]):
            if t1 - t0 < 1e-9:
                continue
            ka = k0 + t0 * direction
            kb = k0 + t1 * direction
            rep = _plane_of_klein((ka + kb) / 2.0)
            truncated = c0 is None or c1 is None
            kind = "axis_segment" if not truncated else "axis_ray_or_line"
            classes.append(
                DualClass(
                    kind,
                    PlanePoint(rep),
                    truncated=truncated,
                    axis=ai,
                    geometry=(ka, kb, c0, c1),
                )
            )

    boundary = window.exterior
    merged = unary_union([boundary] + chords)
    for face in polygonize(merged):
        c = face.representative_point()
        k = complex(c.x, c.y)
        if abs(k) >= rw:
            continue
        truncated = face.exterior.distance(boundary) < 1e-7
        rep = _plane_of_klein(k)
        classes.append(DualClass("region", PlanePoint(rep), truncated=truncated, geometry=face))

    for i, cl in enumerate(classes):
        cl.index = i
    return classes


def build_dual_graph(classes, mu: AtomicCurrent, arrangement: Arrangement) -> DualGraph:
    """Adjacency edges between quotient classes, weighted by dual distance.

    Regions connect to the axis pieces and crossing points on their boundary;
    axis pieces connect to the crossings at their ends. Regions never connect
    directly to regions, nor axis pieces to axis pieces.
    """
    edges = []
    regions = [c for c in classes if c.kind == "region"]
    pieces = [c for c in classes if c.kind in ("axis_segment", "axis_ray_or_line")]
    points = [c for c in classes if c.kind == "crossing_point"]
    weight_of = lambda ai: arrangement.axes[ai].weight

    for r in regions:
        face = r.geometry
        ring = face.exterior
        for p in pieces:
            if p.geometry is None:
                continue
            ka, kb = p.geometry[0], p.geometry[1]
            mid = (ka + kb) / 2.0
            if ring.distance(Point(mid.real, mid.imag)) < 1e-7:
                edges.append((r.index, p.index, weight_of(p.axis) / 2.0))
        for q in points:
            k = q.geometry
            if ring.distance(Point(k.real, k.imag)) < 1e-7:
                cr = arrangement.crossings[q.crossing]
                w = weight_of(cr.axis1) + weight_of(cr.axis2)
                edges.append((r.index, q.index, w / 2.0))

    for p in pieces:
        if p.kind == "axis_ray_or_line" and len(p.geometry) == 2:
            continue
        ka, kb, c0, c1 = p.geometry
        for cidx in (c0, c1):
            if cidx is None:
                continue
            q = points[cidx]
            cr = arrangement.crossings[cidx]
            other = cr.axis2 if cr.axis1 == p.axis else cr.axis1
            edges.append((p.index, q.index, weight_of(other) / 2.0))

    return DualGraph(nodes=list(classes), edges=edges)


def graph_distance(G: DualGraph, n1: int, n2: int) -> float:
    g = G.to_networkx()
    try:
        return nx.shortest_path_length(g, n1, n2, weight="weight")
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        raise Disconnected(f"no path between classes {n1} and {n2} inside the window")


# ---------------------------------------------------------------------------
# Rendering.
# ---------------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x: float) -> str:
    v = 0.0 if abs(x) < 5e-7 else x
    return f"{v:.6f}"


def _arc_path(th1: float, th2: float) -> str:
    """SVG path for the Poincare-disk geodesic between two boundary angles."""
    u = complex(math.cos(th1), math.sin(th1))
    v = complex(math.cos(th2), math.sin(th2))
    denom = 1.0 + (u * v.conjugate()).real
    if abs(denom) < 1e-9:
        return f"M {_fmt(u.real)} {_fmt(u.imag)} L {_fmt(v.real)} {_fmt(v.imag)}"
    # circle orthogonal to the unit circle through u and v
    c = (u + v) / denom
    r = abs(u - c)
    # pick the sweep flag whose implied arc center (SVG endpoint convention)
    # matches c; the large-arc flag is 0 since the center is outside the disk
    d = (u - v) / 2.0
    h2 = max(r * r - abs(d) ** 2, 0.0)
    mid = (u + v) / 2.0
    sweep = 0
    for fs in (0, 1):
        sign = 1.0 if fs == 1 else -1.0
        coef = sign * math.sqrt(h2) / max(abs(d), 1e-300)
        center = mid + complex(coef * d.imag, -coef * d.real)
        if abs(center - c) < 1e-9:
            sweep = fs
            break
    return (
        f"M {_fmt(u.real)} {_fmt(u.imag)} "
        f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(v.real)} {_fmt(v.imag)}"
    )


def render_svg(A: Arrangement, G: DualGraph | None, path: str) -> None:
    """Deterministic disk-model SVG: boundary, axes, crossings, graph overlay."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.05 -1.05 2.10 2.10" width="600" height="600">',
        '<g transform="scale(1,-1)">',
        '<circle cx="0.000000" cy="0.000000" r="1.000000" fill="none" stroke="#000000" stroke-width="0.004"/>',
    ]
    r_w = math.tanh(A.window_radius) if A.window_radius < 20 else None
    if r_w is not None:
        rp = r_w / (1.0 + math.sqrt(1 - r_w * r_w))
        lines.append(
            f'<circle cx="0.000000" cy="0.000000" r="{_fmt(rp)}" fill="none" stroke="#bbbbbb" '
            'stroke-width="0.002" stroke-dasharray="0.02 0.02"/>'
        )
    for ax in A.axes:
        color = _PALETTE[ax.component % len(_PALETTE)]
        d = _arc_path(ax.geodesic.e1.theta, ax.geodesic.e2.theta)
        lines.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="0.004"/>')
    for cr in A.crossings:
        w = _poincare_of_klein(cr.klein)
        lines.append(
            f'<circle cx="{_fmt(w.real)}" cy="{_fmt(w.imag)}" r="0.010000" fill="#000000"/>'
        )
    if G is not None:
        pos = {}
        for n in G.nodes:
            w = to_disk(n.representative.z)
            pos[n.index] = w
            fill = {"region": "#ffffff", "axis_segment": "#888888", "axis_ray_or_line": "#cccccc", "crossing_point": "#000000"}[n.kind]
            lines.append(
                f'<circle cx="{_fmt(w.real)}" cy="{_fmt(w.imag)}" r="0.014000" fill="{fill}" '
                'stroke="#333333" stroke-width="0.002"/>'
            )
        for i, j, _ in G.edges:
            a, b = pos[i], pos[j]
            lines.append(
                f'<line x1="{_fmt(a.real)}" y1="{_fmt(a.imag)}" x2="{_fmt(b.real)}" y2="{_fmt(b.imag)}" '
                'stroke="#666666" stroke-width="0.002"/>'
            )
    lines.append("</g>")
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
