import itertools

import numpy as np
import pytest

from conftest import random_panel
from conpool.distance import rmsd
from conpool.scoring import (
    EffectivenessViolation,
    affine_score,
    contest_score,
    effectiveness_audit,
    expected_score,
    quadratic_score,
)


@pytest.mark.parametrize(
    "f, e, expected",
    [([1, 0], 1, 1.0), ([0.5, 0.5], 1, 0.5), ([0.5, 0.5], 2, 0.5), ([0.99, 0.01], 2, -0.9602)],
)
def test_quadratic_score(f, e, expected):
    assert quadratic_score(f, e) == pytest.approx(expected, abs=1e-9)


def test_quadratic_score_bounds_and_index():
    rng = np.random.default_rng(0)
    for f in rng.dirichlet(np.ones(4), 100):
        for e in range(1, 5):
            assert -1.0 <= quadratic_score(f, e) <= 1.0
    with pytest.raises(ValueError):
        quadratic_score([0.5, 0.5], 3)
    with pytest.raises(ValueError):
        quadratic_score([0.5, 0.5], 0)


@pytest.mark.parametrize(
    "f, e, expected", [([0.99, 0.01], 1, 99.96), ([0.99, 0.01], 2, -292.04), ([0.5, 0.5], 1, 0.0)]
)
def test_affine_contest_values(f, e, expected):
    assert affine_score(f, e, 200, -100) == pytest.approx(expected, abs=1e-9)


def test_affine_requires_positive_scale():
    with pytest.raises(ValueError):
        affine_score([0.5, 0.5], 1, 0, 1)


@pytest.mark.parametrize(
    "p_l, expected",
    [(0.51, -4.04), (0.49, 3.96), (0.5, 0.0), (0.01, 99.96), (0.99, -292.04)],
)
def test_contest_score(p_l, expected):
    assert contest_score(p_l) == pytest.approx(expected, abs=1e-9)


def test_contest_score_range():
    for bad in (-0.1, 1.1):
        with pytest.raises(ValueError):
            contest_score(bad)


def test_contest_equals_affine_quadratic():
    for p_l in np.linspace(0, 1, 101):
        # loser is outcome 2, so the winner (outcome 1) got 1 - p_l
        assert contest_score(p_l) == pytest.approx(
            affine_score([1 - p_l, p_l], 1, 200, -100), abs=1e-12
        )


@pytest.mark.parametrize(
    "b, r, expected",
    [([0.5, 0.5], [0.5, 0.5], 0.5), ([0.9, 0.1], [0.05, 0.95], -0.625), ([1, 0], [1, 0], 1.0)],
)
def test_expected_score_examples(b, r, expected):
    assert expected_score(b, r) == pytest.approx(expected, abs=1e-9)


def test_expected_score_expansion():
    rng = np.random.default_rng(1)
    for _ in range(200):
        z = rng.integers(2, 7)
        b, r = rng.dirichlet(np.ones(z), 2)
        assert expected_score(b, r) == pytest.approx(2 * r @ b - r @ r, abs=1e-12)


def test_expected_score_monotone_in_rmsd():
    rng = np.random.default_rng(2)
    for _ in range(500):
        z = rng.integers(2, 7)
        b, r1, r2 = rng.dirichlet(np.ones(z), 3)
        d1, d2 = rmsd(b, r1), rmsd(b, r2)
        if abs(d1 - d2) < 1e-12:
            continue
        assert (d1 < d2) == (expected_score(b, r1) > expected_score(b, r2))


def _simplex_grid(z, step=0.05):
    k = round(1 / step)
    pts = [c for c in itertools.product(range(k + 1), repeat=z - 1) if sum(c) <= k]
    return np.array([[*c, k - sum(c)] for c in pts], dtype=float) / k


@pytest.mark.parametrize("z", [2, 3])
def test_strict_properness_on_grid(z):
    rng = np.random.default_rng(10 + z)
    grid = _simplex_grid(z)
    for b in rng.dirichlet(np.ones(z), 20):
        scores = np.array([expected_score(b, r) for r in grid])
        nearest = np.argmin(np.linalg.norm(grid - b, axis=1))
        assert scores[nearest] == pytest.approx(scores.max(), abs=1e-12)
    # a believer on the grid is maximized exactly at itself
    b = grid[len(grid) // 2]
    scores = np.array([expected_score(b, r) for r in grid])
    assert np.argmax(scores) == len(grid) // 2
    assert np.sum(scores >= scores.max() - 1e-12) == 1


def test_effectiveness_worked_example(example_panel):
    assert effectiveness_audit(example_panel, 0.01) == []
    assert effectiveness_audit([[0.3, 0.7]], 0.01) == []


def test_effectiveness_random_panels():
    rng = np.random.default_rng(3)
    for _ in range(200):
        assert effectiveness_audit(random_panel(rng), 1e-4) == []


def test_effectiveness_audit_detects_reversed_rule(example_panel):
    # negating the score (x < 0) must break effectiveness; shows the audit can fail
    def reversed_rule(f, e):
        return -quadratic_score(f, e)

    found = effectiveness_audit(example_panel, 0.01, rule=reversed_rule)
    assert found and all(isinstance(v, EffectivenessViolation) for v in found)
    v = found[0]
    assert (v.weight_order[0] < v.weight_order[1]) != (
        v.expected_score_order[1] > v.expected_score_order[0]
    )
