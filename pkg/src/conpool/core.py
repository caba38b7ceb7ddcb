"""Probability vectors, row-stochastic matrices and the delta/gamma functionals.

Opinions and panels are plain numpy arrays. The ``check_*`` helpers validate
them and hand back read-only float copies, so a validated object can be
shared freely without defensive copying.
"""

from __future__ import annotations

import numpy as np

STOCHASTIC_TOL = 1e-9
# floating-point slack on the [0, 1] entry bounds
RANGE_TOL = 1e-12


class InvalidOpinionError(ValueError):
    """Raised when a vector is not a probability vector.

    ``reason`` is one of ``"dimension-too-small"``, ``"entry-out-of-range"``,
    ``"sum-not-one"``, ``"not-finite"`` or ``"shape"``.
    """

    def __init__(self, message: str, reason: str, index=None, value=None):
        super().__init__(message)
        self.reason = reason
        self.index = index
        self.value = value


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def _check_rows(m: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(m)):
        bad = tuple(int(i) for i in np.argwhere(~np.isfinite(m))[0])
        raise InvalidOpinionError(
            f"{what} has a non-finite entry at index {bad}", "not-finite", bad
        )
    out = (m < -RANGE_TOL) | (m > 1.0 + RANGE_TOL)
    if out.any():
        bad = tuple(int(i) for i in np.argwhere(out)[0])
        raise InvalidOpinionError(
            f"{what} entry at index {bad} is {m[bad]!r}, outside [0, 1]",
            "entry-out-of-range",
            bad,
            float(m[bad]),
        )
    sums = m.sum(axis=-1)
    off = np.abs(sums - 1.0) > STOCHASTIC_TOL
    if np.any(off):
        row = int(np.argwhere(np.atleast_1d(off))[0][0])
        s = float(np.atleast_1d(sums)[row])
        raise InvalidOpinionError(
            f"{what} row {row} sums to {s!r}, not 1", "sum-not-one", row, s
        )


def validate_opinion(raw) -> np.ndarray:
    """Check that ``raw`` is a probability vector over at least two outcomes.

    Entries are never rescaled; a vector that does not already sum to one
    (within ``STOCHASTIC_TOL``) is rejected.

    Returns
    -------
    ndarray of shape (z,)
        Read-only float copy of ``raw``.
    """
    f = np.asarray(raw, dtype=float)
    if f.ndim != 1:
        raise InvalidOpinionError(
            f"an opinion must be one-dimensional, got shape {f.shape}", "shape"
        )
    if f.shape[0] < 2:
        raise InvalidOpinionError(
            f"an opinion needs at least 2 outcomes, got {f.shape[0]}",
            "dimension-too-small",
        )
    _check_rows(f, "opinion")
    return _frozen(f)


def check_stochastic(m) -> np.ndarray:
    """Validate a 2-D row-stochastic matrix (any number of columns >= 1)."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidOpinionError(
            f"expected a non-empty 2-D matrix, got shape {m.shape}", "shape"
        )
    _check_rows(m, "matrix")
    return m


def check_panel(panel) -> np.ndarray:
    """Validate an opinion panel: an (n, z) row-stochastic matrix, n >= 1, z >= 2."""
    m = check_stochastic(panel)
    if m.shape[1] < 2:
        raise InvalidOpinionError(
            f"opinions need at least 2 outcomes, got {m.shape[1]}",
            "dimension-too-small",
        )
    return _frozen(m)


def renormalize(raw) -> np.ndarray:
    """Scale a non-negative vector so it sums to one. Explicit opt-in only."""
    f = np.asarray(raw, dtype=float)
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise InvalidOpinionError("cannot renormalize negative or non-finite entries",
                                  "entry-out-of-range")
    s = f.sum()
    if s <= 0:
        raise InvalidOpinionError("cannot renormalize an all-zero vector", "sum-not-one")
    return validate_opinion(f / s)


def _pairwise_l1(m: np.ndarray) -> np.ndarray:
    return np.abs(m[:, None, :] - m[None, :, :]).sum(axis=-1)


def delta(m) -> float:
    """Half the largest L1 distance between any two rows of ``m``.

    Zero exactly when every row is the same, which is how consensus is
    detected.
    """
    return _delta(check_stochastic(m))


def _delta(m: np.ndarray) -> float:
    # no validation; used inside iteration loops
    return float(min(0.5 * _pairwise_l1(m).max(), 1.0))


def gamma(m) -> float:
    """Smallest overlap ``sum_k min(m[i, k], m[j, k])`` over all row pairs."""
    m = check_stochastic(m)
    overlap = np.minimum(m[:, None, :], m[None, :, :]).sum(axis=-1)
    return float(np.clip(overlap.min(), 0.0, 1.0))
