"""Run every pooling method over a set of games and compare them."""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .evaluation import (
    GameRecord,
    GameResult,
    MethodResult,
    absolute_error,
    overall_accuracy,
    wilcoxon_left_tailed,
)
from .pooling import ConvergenceError, PoolConfig, average_pool, bms_pool, consensual_pool

METHODS = ("consensual", "average", "bms")


@dataclass(frozen=True)
class RunConfig:
    methods: tuple[str, ...] = METHODS
    epsilon: float = 1e-4
    tolerance: float = 1e-9
    max_iterations: int = 1_000_000
    bms_clamp: float = 0.01
    opinions_path: str | None = None
    outcomes_path: str | None = None
    report_path: str | None = None
    report_format: str = "json"
    renormalize_inputs: bool = False
    complement: bool = False
    trace: bool = False
    seed: int | None = None

    def __post_init__(self):
        if not self.methods:
            raise ValueError("select at least one method")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("methods listed more than once")
        if self.report_format not in ("json", "csv"):
            raise ValueError(f"unknown report format {self.report_format!r}")
        self.pool_config  # validates numeric fields

    @property
    def pool_config(self) -> PoolConfig:
        return PoolConfig(self.epsilon, self.tolerance, self.max_iterations, self.bms_clamp)


@dataclass
class EvaluationReport:
    config: dict
    game_ids: list[str]
    methods: dict[str, MethodResult]
    pairwise: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def game(g: GameResult) -> dict:
            d = {
                "game_id": g.game_id,
                "aggregate": [float(x) for x in g.aggregate],
                "absolute_error": float(g.absolute_error),
            }
            if g.iterations is not None:
                d["iterations"] = g.iterations
            if g.delta_trace is not None:
                d["delta_trace"] = [float(x) for x in g.delta_trace]
            return d

        methods = {}
        for name, m in self.methods.items():
            methods[name] = {
                "metrics": {
                    "overall_accuracy": m.overall_accuracy,
                    "n_favorite": m.n_favorite,
                    "n_no_favorite": m.n_no_favorite,
                    "mean_absolute_error": m.mean_absolute_error,
                    "stddev_absolute_error": m.stddev_absolute_error,
                    "n_games": len(m.per_game),
                    "n_skipped": len(m.skipped_games),
                },
                "per_game": [game(g) for g in m.per_game],
                "skipped_games": [
                    {"game_id": gid, "reason": reason} for gid, reason in m.skipped_games
                ],
            }
        return {
            "config": dict(self.config),
            "n_games": len(self.game_ids),
            "warnings": list(self.warnings),
            "methods": methods,
            "pairwise_wilcoxon": [dict(p) for p in self.pairwise],
        }


def _aggregate(method: str, record: GameRecord, config: RunConfig) -> GameResult:
    if method == "consensual":
        r = consensual_pool(record.panel, config.pool_config)
        return GameResult(
            record.game_id,
            r.consensus,
            absolute_error(r.consensus, record.winner),
            iterations=r.iterations,
            delta_trace=r.delta_trace if config.trace else None,
        )
    if method == "average":
        agg = average_pool(record.panel)
    else:
        agg = bms_pool(record.panel, config.bms_clamp)
    return GameResult(record.game_id, agg, absolute_error(agg, record.winner))


def evaluate_method(method: str, games: Sequence[GameRecord], config: RunConfig) -> MethodResult:
    """Pool every game with one method and summarize the errors.

    Games the method cannot handle (no consensus within the iteration cap,
    a single-expert panel for BMS) are listed in ``skipped_games``.
    """
    result = MethodResult(method)
    for record in games:
        try:
            result.per_game.append(_aggregate(method, record, config))
        except ConvergenceError as exc:
            result.skipped_games.append((record.game_id, f"non-convergence: {exc}"))
        except ValueError as exc:
            if method == "bms" and record.panel.shape[0] < 2:
                result.skipped_games.append((record.game_id, f"bms: {exc}"))
            else:
                raise ValueError(f"game {record.game_id}, method {method}: {exc}") from exc

    if result.per_game:
        winners = {g.game_id: g.winner for g in games}
        acc = overall_accuracy((g.aggregate, winners[g.game_id]) for g in result.per_game)
        result.overall_accuracy = acc.accuracy
        result.n_favorite = acc.counted
        result.n_no_favorite = acc.excluded
        errors = np.array([g.absolute_error for g in result.per_game])
        result.mean_absolute_error = float(errors.mean())
        result.stddev_absolute_error = float(errors.std())
    return result


def compare(a: MethodResult, b: MethodResult) -> dict:
    """Left-tailed Wilcoxon on per-game absolute error ``a - b`` over games both scored."""
    err_b = {g.game_id: g.absolute_error for g in b.per_game}
    diffs = [g.absolute_error - err_b[g.game_id] for g in a.per_game if g.game_id in err_b]
    out = {"method_a": a.method_name, "method_b": b.method_name, "n_paired": len(diffs)}
    try:
        w = wilcoxon_left_tailed(diffs)
    except ValueError as exc:
        out.update(statistic=None, p_value=None, n=0, exact=None, zeros_dropped=len(diffs),
                   note=str(exc))
        return out
    out.update(asdict(w))
    return out


def run_benchmark(games: Sequence[GameRecord], config: RunConfig) -> EvaluationReport:
    """Score each selected method on ``games`` and test every method pair."""
    if not games:
        raise ValueError("no games to evaluate")
    for g in games:
        if g.panel.shape[1] != 2:
            raise ValueError(
                f"game {g.game_id}: metrics need 2 outcomes, got {g.panel.shape[1]}"
            )
    results = {m: evaluate_method(m, games, config) for m in config.methods}
    warnings = [
        f"{m}: game {gid} skipped ({reason})"
        for m, r in results.items()
        for gid, reason in r.skipped_games
    ]
    pairwise = [
        compare(results[a], results[b]) for a, b in itertools.combinations(config.methods, 2)
    ]
    cfg = {
        "methods": list(config.methods),
        "epsilon": config.epsilon,
        "tolerance": config.tolerance,
        "max_iterations": config.max_iterations,
        "bms_clamp": config.bms_clamp,
        "renormalize_inputs": config.renormalize_inputs,
        "seed": config.seed,
    }
    return EvaluationReport(cfg, [g.game_id for g in games], results, pairwise, warnings)
