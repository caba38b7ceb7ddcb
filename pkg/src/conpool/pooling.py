"""Linear opinion pools: consensual (distance-weighted iterative), average and BMS."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import STOCHASTIC_TOL, _delta, _frozen, check_panel, validate_opinion
from .distance import pairwise_kl, pairwise_rmsd

DEFAULT_EPSILON = 1e-4
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITERATIONS = 1_000_000
DEFAULT_BMS_CLAMP = 0.01


class ConvergenceError(RuntimeError):
    """The consensual iteration hit ``max_iterations`` before consensus.

    ``result`` holds the state reached so far; ``final_delta`` its spread.
    """

    def __init__(self, message: str, result: "ConsensusResult"):
        super().__init__(message)
        self.result = result
        self.final_delta = result.delta_trace[-1]


class DegeneratePanelWarning(UserWarning):
    """BMS weights are undefined because all opinions coincide."""


@dataclass(frozen=True)
class PoolConfig:
    epsilon: float = DEFAULT_EPSILON
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    bms_clamp: float = DEFAULT_BMS_CLAMP

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be a positive integer, got {self.max_iterations!r}"
            )
        if not 0 < self.bms_clamp < 0.5:
            raise ValueError(f"bms_clamp must lie in (0, 0.5), got {self.bms_clamp!r}")


@dataclass(frozen=True)
class ConsensusResult:
    """Outcome of :func:`consensual_pool`.

    ``final_weight_matrix`` is the weight matrix the experts assign at the
    final panel, i.e. the matrix that would drive the next revision.
    """

    consensus: np.ndarray
    iterations: int
    delta_trace: tuple[float, ...]
    effective_weights: np.ndarray
    final_weight_matrix: np.ndarray
    final_panel: np.ndarray = field(repr=False)

    @property
    def converged_delta(self) -> float:
        return self.delta_trace[-1]


def check_weights(weights, n: int) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.shape[0] != n:
        raise ValueError(f"expected {n} weights, got shape {w.shape}")
    if np.any(w < 0) or np.any(w > 1) or abs(w.sum() - 1.0) > STOCHASTIC_TOL:
        raise ValueError("weights must be a probability vector")
    return w


def linear_pool(panel, weights) -> np.ndarray:
    """Weighted average ``sum_i w_i f_i`` of the panel's rows."""
    F = check_panel(panel)
    w = check_weights(weights, F.shape[0])
    return _frozen(w @ F)


def _weights(F: np.ndarray, epsilon: float) -> np.ndarray:
    raw = 1.0 / (epsilon + pairwise_rmsd(F))
    return raw / raw.sum(axis=1, keepdims=True)


def consensual_weights(panel, epsilon: float) -> np.ndarray:
    """(n, n) row-stochastic matrix with ``P[i, j]`` proportional to ``1 / (epsilon + D(f_i, f_j))``."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    return _frozen(_weights(check_panel(panel), epsilon))


def consensual_step(panel, epsilon: float) -> np.ndarray:
    """One synchronous revision: every expert re-pools using weights from the current panel."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    F = check_panel(panel)
    return _frozen(_weights(F, epsilon) @ F)


def effective_weights(weight_history: Sequence) -> np.ndarray:
    """First row of ``P_t @ ... @ P_1`` for a history ``[P_1, ..., P_t]``."""
    if len(weight_history) == 0:
        raise ValueError("weight history is empty")
    n = np.asarray(weight_history[0]).shape[0]
    acc = np.eye(n)
    for k, P in enumerate(weight_history):
        P = np.asarray(P, dtype=float)
        if P.shape != (n, n):
            raise ValueError(f"matrix {k} has shape {P.shape}, expected {(n, n)}")
        acc = P @ acc
    return _frozen(acc[0])


def consensual_pool(panel, config: PoolConfig | None = None) -> ConsensusResult:
    """Iterate :func:`consensual_step` until the panel agrees.

    Stops once ``delta(F) < config.tolerance``. The consensus is the first
    row of the final panel; the remaining rows differ from it by less than
    the tolerance.

    Raises
    ------
    ConvergenceError
        If ``config.max_iterations`` revisions leave ``delta`` at or above the
        tolerance. The partial result is attached to the exception.
    """
    config = config or PoolConfig()
    F = np.array(check_panel(panel))
    n = F.shape[0]
    eps = config.epsilon

    # accumulated product P_t ... P_1; only its first row is reported
    acc = np.eye(n)
    trace = [_delta(F)]
    t = 0
    while trace[-1] >= config.tolerance and t < config.max_iterations:
        P = _weights(F, eps)
        F = P @ F
        acc = P @ acc
        t += 1
        trace.append(_delta(F))

    beta = acc[0] / acc[0].sum()
    result = ConsensusResult(
        consensus=_frozen(F[0]),
        iterations=t,
        delta_trace=tuple(trace),
        effective_weights=_frozen(beta),
        final_weight_matrix=_frozen(_weights(F, eps)),
        final_panel=_frozen(F),
    )
    if trace[-1] >= config.tolerance:
        raise ConvergenceError(
            f"no consensus after {t} revisions (delta = {trace[-1]:.3e})", result
        )
    return result


def average_pool(panel) -> np.ndarray:
    """Equal-weight linear pool."""
    F = check_panel(panel)
    return _frozen(F.mean(axis=0))


def recalibrate(panel, clamp: float = DEFAULT_BMS_CLAMP) -> np.ndarray:
    """Replace exact 0 entries by ``clamp`` and exact 1 entries by ``1 - clamp``, then renormalize rows."""
    if not 0 < clamp < 0.5:
        raise ValueError(f"clamp must lie in (0, 0.5), got {clamp!r}")
    F = np.array(check_panel(panel))
    F[F == 0.0] = clamp
    F[F == 1.0] = 1.0 - clamp
    return F / F.sum(axis=1, keepdims=True)


def bms_weights(
    panel,
    clamp: float = DEFAULT_BMS_CLAMP,
    divergence: Callable[[np.ndarray, np.ndarray], float] | None = None,
) -> np.ndarray:
    """Weights inversely proportional to each expert's largest divergence to a peer.

    Divergences are computed on the recalibrated panel, using KL in nats
    unless another ``divergence(a, b)`` is supplied. When the panel is
    unanimous every divergence is zero; uniform weights are returned and a
    :class:`DegeneratePanelWarning` is emitted.
    """
    F = check_panel(panel)
    n = F.shape[0]
    if n < 2:
        raise ValueError("BMS weights need at least two experts")
    G = recalibrate(F, clamp)
    if divergence is None:
        farthest = pairwise_kl(G).max(axis=1)
    else:
        farthest = np.array(
            [max(divergence(G[i], G[j]) for j in range(n)) for i in range(n)]
        )
    if np.any(farthest <= 0.0):
        warnings.warn(
            "all opinions coincide; BMS falls back to uniform weights",
            DegeneratePanelWarning,
            stacklevel=2,
        )
        return np.full(n, 1.0 / n)
    inv = 1.0 / farthest
    return inv / inv.sum()


def bms_pool(
    panel,
    clamp: float = DEFAULT_BMS_CLAMP,
    divergence: Callable[[np.ndarray, np.ndarray], float] | None = None,
) -> np.ndarray:
    """BMS linear pool of the reported opinions.

    Recalibration only feeds the weights; the pool itself averages the
    opinions as reported.
    """
    F = check_panel(panel)
    w = bms_weights(F, clamp, divergence)
    return validate_opinion(w @ F)
