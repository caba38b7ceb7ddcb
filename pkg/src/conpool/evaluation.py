"""Accuracy metrics, a left-tailed Wilcoxon signed-rank test and synthetic panels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .core import check_panel, validate_opinion

EXACT_MAX_PAIRS = 20


@dataclass(frozen=True)
class GameRecord:
    """One event: the experts who reported on it and the realized outcome (1-based)."""

    game_id: str
    panel: np.ndarray
    winner: int

    def __post_init__(self):
        panel = check_panel(self.panel)
        object.__setattr__(self, "panel", panel)
        if int(self.winner) != self.winner or not 1 <= self.winner <= panel.shape[1]:
            raise ValueError(
                f"game {self.game_id}: winner {self.winner!r} not in 1..{panel.shape[1]}"
            )
        object.__setattr__(self, "winner", int(self.winner))


@dataclass
class GameResult:
    game_id: str
    aggregate: np.ndarray
    absolute_error: float
    iterations: int | None = None
    delta_trace: tuple | None = None


@dataclass
class MethodResult:
    method_name: str
    per_game: list[GameResult] = field(default_factory=list)
    overall_accuracy: float | None = None
    n_favorite: int = 0
    n_no_favorite: int = 0
    mean_absolute_error: float | None = None
    stddev_absolute_error: float | None = None
    skipped_games: list = field(default_factory=list)  # (game_id, reason)


@dataclass(frozen=True)
class AccuracyResult:
    accuracy: float | None
    correct: int
    counted: int
    excluded: int


def _binary(f, what="aggregate") -> np.ndarray:
    f = validate_opinion(f)
    if f.shape[0] != 2:
        raise ValueError(f"{what} must have exactly 2 outcomes, got {f.shape[0]}")
    return f


def overall_accuracy(results: Iterable[tuple]) -> AccuracyResult:
    """Share of games whose predicted favorite won.

    A favorite exists only if some outcome gets probability strictly above
    0.5; games without one are counted in ``excluded`` and nowhere else.
    ``accuracy`` is None when no game has a favorite.
    """
    results = list(results)
    if not results:
        raise ValueError("no games to score")
    correct = counted = excluded = 0
    for aggregate, winner in results:
        f = _binary(aggregate)
        if winner not in (1, 2):
            raise ValueError(f"winner must be 1 or 2, got {winner!r}")
        fav = np.flatnonzero(f > 0.5)
        if fav.size == 0:
            excluded += 1
            continue
        counted += 1
        correct += int(fav[0] + 1 == winner)
    return AccuracyResult(correct / counted if counted else None, correct, counted, excluded)


def absolute_error(aggregate, winner: int) -> float:
    """Probability the aggregate gave to the outcome that did not happen."""
    f = _binary(aggregate)
    if winner not in (1, 2):
        raise ValueError(f"winner must be 1 or 2, got {winner!r}")
    return float(f[2 - winner])


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W+, sum of ranks of positive differences
    p_value: float
    n: int  # nonzero differences used
    exact: bool
    zeros_dropped: int


def _signed_ranks(differences):
    d = np.asarray(differences, dtype=float).ravel()
    if not np.all(np.isfinite(d)):
        raise ValueError("differences must be finite")
    nonzero = d[d != 0.0]
    if nonzero.size == 0:
        raise ValueError("all differences are zero; the test is undefined")
    ranks = rankdata(np.abs(nonzero))  # average ranks for ties
    return nonzero, ranks, d.size - nonzero.size


def _exact_left_p(ranks: np.ndarray, w_plus: float) -> float:
    # Null distribution of W+ by dynamic programming over doubled ranks,
    # which are integers even with average-rank ties.
    doubled = np.rint(2 * ranks).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:-r]
        counts = counts + shifted
    cut = int(np.rint(2 * w_plus))
    return float(counts[: cut + 1].sum() / counts.sum())


def _normal_left_p(ranks: np.ndarray, w_plus: float) -> float:
    m = ranks.size
    mean = m * (m + 1) / 4.0
    _, tie_sizes = np.unique(ranks, return_counts=True)
    var = m * (m + 1) * (2 * m + 1) / 24.0 - np.sum(tie_sizes**3 - tie_sizes) / 48.0
    z = (w_plus - mean + 0.5) / math.sqrt(var)
    return min(1.0, NormalDist().cdf(z))


def wilcoxon_left_tailed(paired_differences: Sequence[float], exact: bool | None = None) -> WilcoxonResult:
    """Left-tailed Wilcoxon signed-rank test on paired differences ``a - b``.

    A small p-value says the differences lean negative, i.e. ``a`` tends to
    be smaller. Exact zeros are dropped and tied magnitudes share average
    ranks. With ``exact=None`` the exact null distribution is used for up
    to ``EXACT_MAX_PAIRS`` nonzero pairs and a continuity-corrected normal
    approximation (tie-adjusted variance) beyond that.
    """
    nonzero, ranks, zeros = _signed_ranks(paired_differences)
    w_plus = float(ranks[nonzero > 0].sum())
    if exact is None:
        exact = nonzero.size <= EXACT_MAX_PAIRS
    p = _exact_left_p(ranks, w_plus) if exact else _normal_left_p(ranks, w_plus)
    return WilcoxonResult(w_plus, p, int(nonzero.size), bool(exact), int(zeros))


def synthetic_panel(
    seed: int | np.random.Generator,
    n: int,
    z: int,
    ground_truth,
    noise: float,
    outlier_count: int = 0,
) -> np.ndarray:
    """Noisy copies of ``ground_truth`` plus uniformly drawn outliers.

    Informed experts report ``ground_truth + noise * N(0, 1)`` clipped to
    [0, 1] and renormalized; outliers are uniform on the simplex and fill
    the last ``outlier_count`` rows.
    """
    truth = validate_opinion(ground_truth)
    if truth.shape[0] != z:
        raise ValueError(f"ground truth has {truth.shape[0]} outcomes, expected {z}")
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= outlier_count < n:
        raise ValueError(f"outlier_count must lie in [0, n), got {outlier_count}")
    if noise < 0:
        raise ValueError("noise must be non-negative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    informed = n - outlier_count
    rows = np.clip(truth + noise * rng.standard_normal((informed, z)), 0.0, 1.0)
    sums = rows.sum(axis=1, keepdims=True)
    rows = np.where(sums > 0, rows / np.where(sums > 0, sums, 1.0), truth)
    outliers = rng.dirichlet(np.ones(z), size=outlier_count)
    return check_panel(np.vstack([rows, outliers]))


def synthetic_games(
    seed: int,
    games: int,
    experts: int,
    noise: float = 0.05,
    outliers: int = 1,
    z: int = 2,
) -> list[GameRecord]:
    """Binary-style benchmark: each game has a hidden truth, a panel and a sampled winner."""
    rng = np.random.default_rng(seed)
    records = []
    for g in range(games):
        truth = rng.dirichlet(np.ones(z))
        panel = synthetic_panel(rng, experts, z, truth, noise, outliers)
        winner = int(rng.choice(z, p=truth)) + 1
        records.append(GameRecord(f"G{g + 1:04d}", panel, winner))
    return records
