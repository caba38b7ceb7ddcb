"""Quadratic scoring rule and the weight/expected-score effectiveness audit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import check_panel, validate_opinion
from .pooling import consensual_weights

TIE_TOL = 1e-12


def _outcome(f: np.ndarray, outcome: int) -> int:
    # outcomes are 1-based
    if int(outcome) != outcome or not 1 <= outcome <= f.shape[0]:
        raise ValueError(f"outcome must be an index in 1..{f.shape[0]}, got {outcome!r}")
    return int(outcome) - 1


def quadratic_score(reported, outcome: int) -> float:
    """``2 f_e - sum_k f_k**2`` for the realized outcome ``e`` (1-based)."""
    f = validate_opinion(reported)
    e = _outcome(f, outcome)
    return float(2.0 * f[e] - np.dot(f, f))


def affine_score(reported, outcome: int, x: float, y: float) -> float:
    """Positive affine transform ``x * R + y`` of the quadratic rule."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    return x * quadratic_score(reported, outcome) + y


def contest_score(prob_assigned_to_loser: float) -> float:
    """Binary contest rule ``100 - 400 * p_l**2``."""
    p = float(prob_assigned_to_loser)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    return 100.0 - 400.0 * p * p


def expected_score(
    believer,
    reported,
    rule: Callable[[np.ndarray, int], float] = quadratic_score,
) -> float:
    """Score of ``reported`` averaged over outcomes drawn from ``believer``."""
    b = validate_opinion(believer)
    r = validate_opinion(reported)
    if b.shape != r.shape:
        raise ValueError(f"dimension mismatch: {b.shape[0]} vs {r.shape[0]} outcomes")
    return float(sum(b[e] * rule(r, e + 1) for e in range(b.shape[0])))


@dataclass(frozen=True)
class EffectivenessViolation:
    evaluator: int
    pair: tuple[int, int]
    weight_order: tuple[float, float]
    expected_score_order: tuple[float, float]


def effectiveness_audit(
    panel,
    epsilon: float,
    rule: Callable[[np.ndarray, int], float] = quadratic_score,
) -> list[EffectivenessViolation]:
    """List every (i, j, k) where weight order and expected-score order disagree.

    For the quadratic rule and its positive affine transforms the list is
    always empty: expert ``i`` puts more weight on ``k`` than on ``j``
    exactly when reporting ``f_k`` would earn ``i`` a higher expected score.
    Differences below ``TIE_TOL`` count as ties and are never violations.
    """
    F = check_panel(panel)
    P = consensual_weights(F, epsilon)
    n, z = F.shape
    # S[j, e]: score of reporting f_j when outcome e occurs; E[i, j] = E_{f_i}[R(f_j)]
    S = np.array([[rule(F[j], e + 1) for e in range(z)] for j in range(n)])
    E = F @ S.T
    dw = P[:, None, :] - P[:, :, None]
    ds = E[:, None, :] - E[:, :, None]
    strict = (np.abs(dw) >= TIE_TOL) & (np.abs(ds) >= TIE_TOL)
    bad = strict & ((dw > 0) != (ds > 0))
    return [
        EffectivenessViolation(
            evaluator=int(i),
            pair=(int(j), int(k)),
            weight_order=(float(P[i, j]), float(P[i, k])),
            expected_score_order=(float(E[i, j]), float(E[i, k])),
        )
        for i, j, k in np.argwhere(bad)
    ]
