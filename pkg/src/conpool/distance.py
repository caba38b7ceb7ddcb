"""Distances between opinions."""

from __future__ import annotations

import numpy as np

from .core import validate_opinion


class UndefinedDivergenceError(ValueError):
    """KL divergence is infinite: ``a[k] > 0`` where ``b[k] == 0``."""


def _pair(a, b):
    a = validate_opinion(a)
    b = validate_opinion(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]} outcomes")
    return a, b


def rmsd(a, b) -> float:
    """Root-mean-square deviation ``sqrt(sum_k (a_k - b_k)**2 / z)``."""
    a, b = _pair(a, b)
    return float(np.sqrt(np.sum((a - b) ** 2) / a.shape[0]))


def pairwise_rmsd(panel: np.ndarray) -> np.ndarray:
    """(n, n) matrix of rmsd between every pair of rows. No validation."""
    diff = panel[:, None, :] - panel[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff) / panel.shape[1])


def kl_divergence(a, b) -> float:
    """Kullback-Leibler divergence of ``b`` from ``a`` in nats.

    Terms with ``a_k == 0`` contribute nothing.
    """
    a, b = _pair(a, b)
    support = a > 0
    if np.any(b[support] == 0):
        k = int(np.argwhere(support & (b == 0))[0][0])
        raise UndefinedDivergenceError(
            f"divergence undefined: a[{k}] = {a[k]!r} but b[{k}] = 0"
        )
    value = np.sum(a[support] * np.log(a[support] / b[support]))
    return float(max(value, 0.0))


def pairwise_kl(panel: np.ndarray) -> np.ndarray:
    """(n, n) matrix with entry (i, j) = KL(row i || row j). No validation.

    Rows must be strictly positive wherever the first argument is positive.
    """
    a = panel[:, None, :]
    b = panel[None, :, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(a > 0, a * np.log(a / b), 0.0)
    return np.maximum(terms.sum(axis=-1), 0.0)
