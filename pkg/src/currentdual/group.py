"""Fuchsian group presentations, word arithmetic and certified orbit enumeration.

Words are strings over single-letter generator labels; an uppercase letter is
the inverse of its lowercase generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import (
    BallTooLarge,
    InvalidMatrix,
    NonHyperbolicGenerator,
    RelatorViolation,
)
from .hyperbolic import (
    Geodesic,
    Isometry,
    PlanePoint,
    Segment,
    apply,
    axis,
    crosses,
    distance_to_geodesic,
    hyp_distance,
    trace_translation_length,
)

PRESET_NAMES = ("punctured_torus", "genus2_octagon")


def _invert_letter(ch: str) -> str:
    return ch.lower() if ch.isupper() else ch.upper()


def invert_word(word: str) -> str:
    return "".join(_invert_letter(ch) for ch in reversed(word))


def free_reduce(word: str) -> str:
    out: list = []
    for ch in word:
        if out and out[-1] == _invert_letter(ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class SurfacePresentation:
    """Labeled hyperbolic generators with optional relators and a basepoint."""

    labels: tuple
    generators: dict  # label -> Isometry, including uppercase inverses
    relators: tuple
    basepoint: PlanePoint
    cusped: bool = False
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.labels)

    def letters(self) -> tuple:
        return tuple(self.labels) + tuple(l.upper() for l in self.labels)

    def evaluate(self, word: str) -> Isometry:
        m = Isometry.identity()
        for ch in word:
            m = m @ self.generators[ch]
        return m

    def element(self, word: str) -> "GroupElement":
        word = free_reduce(word)
        return GroupElement(word, self.evaluate(word))

    def max_generator_displacement(self) -> float:
        o = self.basepoint
        return max(hyp_distance(o, apply(g, o)) for g in self.generators.values())


@dataclass(frozen=True)
class GroupElement:
    """A freely reduced word with its cached matrix."""

    word: str
    matrix: Isometry

    def __len__(self) -> int:
        return len(self.word)


def load_presentation(source) -> SurfacePresentation:
    """Load a presentation from a preset name, a file path, or a parsed dict.

    Validates that every generator is hyperbolic and that every relator
    evaluates to plus or minus the identity.
    """
    name = ""
    if isinstance(source, str):
        if source in PRESET_NAMES:
            name = source
            text = resources.files("currentdual.data").joinpath(source + ".json").read_text()
            cfg = json.loads(text)
        else:
            name = source
            with open(source) as fh:
                cfg = json.load(fh)
    else:
        cfg = source

    mats = cfg["generators"]
    labels = tuple(cfg.get("labels") or "abcdefgh"[: len(mats)])
    if len(labels) != len(mats):
        raise InvalidMatrix("label count does not match generator count")
    for lab in labels:
        if not (len(lab) == 1 and lab.islower() and lab.isalpha()):
            raise InvalidMatrix(f"labels must be single lowercase letters, got {lab!r}")

    gens = {}
    for lab, row in zip(labels, mats):
        m = np.asarray(row, dtype=float).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > 1e-8:
            raise InvalidMatrix(f"generator {lab} has det {det}, expected 1")
        g = Isometry(m)
        if g.classify() != "hyperbolic":
            raise NonHyperbolicGenerator(f"generator {lab} is {g.classify()}")
        gens[lab] = g
        gens[lab.upper()] = g.inverse()

    bp = cfg.get("basepoint", [0.0, 1.0])
    pres = SurfacePresentation(
        labels=labels,
        generators=gens,
        relators=tuple(cfg.get("relators") or ()),
        basepoint=PlanePoint(complex(bp[0], bp[1])),
        cusped=bool(cfg.get("cusped", False)),
        name=name or cfg.get("name", ""),
    )
    ident = np.eye(2)
    for rel in pres.relators:
        m = pres.evaluate(rel).m
        err = min(np.abs(m - ident).max(), np.abs(m + ident).max())
        if err > 1e-8:
            raise RelatorViolation(f"relator {rel} off identity by {err:.3g}")
    return pres


def cyclic_reduce(pres: SurfacePresentation, g: GroupElement) -> GroupElement:
    """Canonical conjugacy-class representative of an unoriented curve.

    Cyclically reduces, then picks the lexicographically least rotation among
    the rotations of the word and of its inverse.
    """
    w = free_reduce(g.word)
    while len(w) >= 2 and w[0] == _invert_letter(w[-1]):
        w = w[1:-1]
    if not w:
        return pres.element("")
    best = min(
        min(w[i:] + w[:i] for i in range(len(w))),
        min((iw := invert_word(w))[i:] + iw[:i] for i in range(len(w))),
    )
    return pres.element(best)


@dataclass
class OrbitBall:
    """Group elements with basepoint displacement at most radius."""

    radius: float
    elements: list = field(default_factory=list)
    complete: bool = True


def enumerate_ball(pres: SurfacePresentation, R: float, cap: int = 2_000_000) -> OrbitBall:
    """Breadth-first enumeration of elements with displacement <= R.

    A freely reduced prefix is pruned once its displacement exceeds
    R + margin, where margin is the largest single-generator displacement:
    one more letter cannot bring it back inside the ball.
    """
    if R < 0:
        raise ValueError("radius must be nonnegative")
    o = pres.basepoint
    margin = pres.max_generator_displacement()
    letters = pres.letters()
    ident = GroupElement("", Isometry.identity())
    ball = [ident]
    seen = {ident.matrix.key()}
    frontier = [ident]
    while frontier:
        nxt = []
        for el in frontier:
            last = el.word[-1] if el.word else ""
            for ch in letters:
                if last and ch == _invert_letter(last):
                    continue
                m = el.matrix @ pres.generators[ch]
                key = m.key()
                if key in seen:
                    continue
                disp = hyp_distance(o, apply(m, o))
                if disp > R + margin:
                    continue
                seen.add(key)
                cand = GroupElement(el.word + ch, m)
                nxt.append(cand)
                if disp <= R + 1e-9:
                    ball.append(cand)
                    if len(ball) > cap:
                        raise BallTooLarge(f"orbit ball at R={R} exceeds cap {cap}")
        frontier = nxt
    return OrbitBall(radius=R, elements=ball)


def _axis_key(gamma: Geodesic, quantum: float = 1e-9) -> tuple:
    a, b = sorted((gamma.e1.theta, gamma.e2.theta))
    return (round(a / quantum), round(b / quantum))


def axis_translates(pres: SurfacePresentation, rep: GroupElement, R: float, cap: int = 2_000_000):
    """Distinct translates h.axis(rep), one per coset, from the ball of radius R.

    Returns a list of (conjugate GroupElement, Geodesic) pairs, deduplicated
    on quantized axis endpoints.
    """
    base_axis = axis(rep.matrix)
    out = []
    seen = set()
    for h in enumerate_ball(pres, R, cap).elements:
        gamma = Geodesic(apply(h.matrix, base_axis.e1), apply(h.matrix, base_axis.e2))
        key = _axis_key(gamma)
        if key in seen:
            continue
        seen.add(key)
        conj = pres.element(free_reduce(h.word + rep.word + invert_word(h.word)))
        out.append((conj, gamma))
    return out


def axes_meeting_segment(pres: SurfacePresentation, rep: GroupElement, s: Segment):
    """All axis translates of rep that meet s, with their crossing class.

    The enumeration budget covers every translate that can reach s: distance
    from the basepoint to s, the segment length, the basepoint-to-axis
    distance, one translation length along the axis, and the generator margin.
    """
    base_axis = axis(rep.matrix)
    o = pres.basepoint
    budget = (
        min(hyp_distance(o, s.a), hyp_distance(o, s.b))
        + s.length()
        + distance_to_geodesic(o, base_axis)
        + trace_translation_length(rep.matrix)
        + pres.max_generator_displacement()
    )
    out = []
    for conj, gamma in axis_translates(pres, rep, budget):
        cls = crosses(gamma, s)
        if cls != "none":
            out.append((conj, gamma, cls))
    return out


def conjugacy_classes(pres: SurfacePresentation, word_bound: int):
    """Canonical nontrivial conjugacy-class words of length <= word_bound."""
    letters = pres.letters()
    words = [""]
    out = []
    seen = set()
    for _ in range(word_bound):
        nxt = []
        for w in words:
            for ch in letters:
                if w and ch == _invert_letter(w[-1]):
                    continue
                nxt.append(w + ch)
        words = nxt
        for w in words:
            c = cyclic_reduce(pres, pres.element(w))
            if c.word and c.word not in seen:
                seen.add(c.word)
                out.append(c)
    return out
