import math

import numpy as np
import pytest

from currentdual import (
    InvalidMatrix,
    NonHyperbolicGenerator,
    RelatorViolation,
    conjugacy_classes,
    cyclic_reduce,
    enumerate_ball,
    hyp_distance,
    load_presentation,
)
from currentdual.group import PRESET_NAMES, free_reduce, invert_word
from currentdual.hyperbolic import PlanePoint, apply


def test_presets_load(torus, genus2):
    assert set(PRESET_NAMES) >= {"punctured_torus", "genus2_octagon"}
    assert torus.labels == ("a", "b")
    assert genus2.labels == ("a", "b", "c", "d")
    assert genus2.relators == ("abABcdCD",)


def test_invalid_determinant_rejected():
    with pytest.raises(InvalidMatrix):
        load_presentation({"generators": [[2.0, 0.0, 0.0, 1.0]], "basepoint": [0, 1]})


def test_elliptic_generator_rejected():
    with pytest.raises(NonHyperbolicGenerator):
        load_presentation({"generators": [[0.0, -1.0, 1.0, 0.0]], "basepoint": [0, 1]})


def test_bad_relator_rejected(torus):
    cfg = {
        "generators": [[1, 1, 1, 2], [1, -1, -1, 2]],
        "relators": ["ab"],
        "basepoint": [0, 1],
    }
    with pytest.raises(RelatorViolation):
        load_presentation(cfg)


def test_free_reduce_and_invert():
    assert free_reduce("abBA") == ""
    assert free_reduce("aAb") == "b"
    assert invert_word("ab") == "BA"


def test_element_evaluates_word(torus):
    g = torus.element("ab")
    expect = torus.generators["a"].m @ torus.generators["b"].m
    # same projective matrix up to sign normalization
    assert np.allclose(np.abs(g.matrix.m), np.abs(expect / np.sqrt(abs(np.linalg.det(expect)))))


def test_cyclic_reduce_canonical(torus):
    # conjugates and rotations of ab agree on one representative
    r1 = cyclic_reduce(torus, torus.element("ab")).word
    assert cyclic_reduce(torus, torus.element("ba")).word == r1
    assert cyclic_reduce(torus, torus.element("Aaba")).word == r1
    assert cyclic_reduce(torus, torus.element("BA")).word == r1  # unoriented


def test_enumerate_ball_matches_naive(torus):
    R = 2.5
    ball = enumerate_ball(torus, R)
    got = {g.word for g in ball.elements}
    # naive: all freely reduced words up to length 4, keep those with small displacement
    o = torus.basepoint
    naive = set()
    frontier = [""]
    for _ in range(4):
        nxt = []
        for w in frontier:
            for letter in "abAB":
                w2 = free_reduce(w + letter)
                if len(w2) > len(w):
                    nxt.append(w2)
        frontier = nxt
        for w in frontier:
            if hyp_distance(o, apply(torus.evaluate(w), o)) <= R:
                naive.add(w)
    naive.add("")
    assert naive <= got


def test_conjugacy_classes_unique_and_reduced(torus):
    classes = conjugacy_classes(torus, 3)
    words = [c.word for c in classes]
    assert len(words) == len(set(words))
    for c in classes:
        assert cyclic_reduce(torus, c).word == c.word
        assert 0 < len(c.word) <= 3


def test_max_generator_displacement(genus2):
    o = genus2.basepoint
    worst = max(hyp_distance(o, apply(g, o)) for g in genus2.generators.values())
    assert abs(genus2.max_generator_displacement() - worst) < 1e-12
