import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conpool.distance import UndefinedDivergenceError, kl_divergence, pairwise_kl, pairwise_rmsd, rmsd


def test_rmsd_worked_example():
    assert rmsd([0.9, 0.1], [0.05, 0.95]) == pytest.approx(0.85, abs=1e-12)
    assert rmsd([0.9, 0.1], [0.2, 0.8]) == pytest.approx(0.7, abs=1e-12)
    assert rmsd([0.3, 0.7], [0.3, 0.7]) == 0.0


def test_rmsd_dimension_mismatch():
    with pytest.raises(ValueError):
        rmsd([0.5, 0.5], [0.2, 0.3, 0.5])


def opinions(z):
    return st.lists(st.floats(0.0, 1.0), min_size=z, max_size=z).filter(
        lambda r: sum(r) > 1e-3
    ).map(lambda r: np.asarray(r) / sum(r))


triples = st.integers(2, 8).flatmap(lambda z: st.tuples(opinions(z), opinions(z), opinions(z)))


@settings(max_examples=300, deadline=None)
@given(triples)
def test_rmsd_is_a_metric(abc):
    a, b, c = abc
    assert rmsd(a, b) >= 0.0
    assert rmsd(a, a) == 0.0
    assert rmsd(a, b) == rmsd(b, a)
    assert rmsd(a, c) <= rmsd(a, b) + rmsd(b, c) + 1e-12
    if not np.array_equal(a, b):
        assert rmsd(a, b) > 0.0


@pytest.mark.parametrize("z", [2, 3, 5, 10])
def test_rmsd_upper_bound_attained_by_point_masses(z):
    e1, e2 = np.eye(z)[0], np.eye(z)[1]
    assert rmsd(e1, e2) == pytest.approx(math.sqrt(2 / z), abs=1e-15)
    rng = np.random.default_rng(z)
    for a, b in zip(rng.dirichlet(np.ones(z), 50), rng.dirichlet(np.ones(z), 50)):
        assert rmsd(a, b) <= math.sqrt(2 / z) + 1e-15


def test_pairwise_rmsd_matches_scalar():
    rng = np.random.default_rng(1)
    F = rng.dirichlet(np.ones(4), size=6)
    D = pairwise_rmsd(F)
    for i in range(6):
        for j in range(6):
            assert D[i, j] == pytest.approx(rmsd(F[i], F[j]), abs=1e-15)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ([0.3, 0.7], [0.3, 0.7], 0.0),
        ([0.5, 0.5], [0.25, 0.75], 0.5 * math.log(2) + 0.5 * math.log(2 / 3)),
        ([0.99, 0.01], [0.01, 0.99], 0.98 * math.log(99)),
    ],
)
def test_kl_examples(a, b, expected):
    assert kl_divergence(a, b) == pytest.approx(expected, abs=1e-12)


def test_kl_rounded_values():
    assert kl_divergence([0.5, 0.5], [0.25, 0.75]) == pytest.approx(0.1438, abs=1e-4)
    assert kl_divergence([0.99, 0.01], [0.01, 0.99]) == pytest.approx(4.5032, abs=1e-4)


def test_kl_zero_convention_and_undefined():
    assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2))
    with pytest.raises(UndefinedDivergenceError):
        kl_divergence([0.5, 0.5], [1.0, 0.0])


def test_kl_gibbs_inequality():
    rng = np.random.default_rng(5)
    for _ in range(300):
        z = rng.integers(2, 8)
        a, b = rng.dirichlet(np.ones(z), size=2)
        assert kl_divergence(a, b) > 0.0
        assert kl_divergence(a, a) == 0.0


def test_pairwise_kl_matches_scalar():
    rng = np.random.default_rng(2)
    F = rng.dirichlet(np.ones(3), size=5)
    K = pairwise_kl(F)
    for i in range(5):
        for j in range(5):
            assert K[i, j] == pytest.approx(kl_divergence(F[i], F[j]), abs=1e-14)
