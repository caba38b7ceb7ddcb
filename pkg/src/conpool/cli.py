"""``pool`` command line: run a benchmark, generate synthetic data, replay the worked example."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .benchmark import METHODS, RunConfig, run_benchmark
from .distance import rmsd
from .evaluation import synthetic_games
from .io import emit_report, load_dataset, write_dataset
from .pooling import PoolConfig, average_pool, consensual_pool, consensual_step, consensual_weights

EXIT_PARSE, EXIT_VALIDATE, EXIT_POOL, EXIT_EMIT = 2, 3, 4, 5

EXAMPLE_PANEL = np.array([[0.9, 0.1], [0.05, 0.95], [0.2, 0.8]])


class StageError(Exception):
    def __init__(self, stage: str, code: int, message: str):
        super().__init__(message)
        self.stage = stage
        self.code = code


def _methods(text: str) -> tuple[str, ...]:
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s): {', '.join(bad)}")
    return methods


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pool", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="aggregate every game with each method and compare")
    run.add_argument("--opinions", required=True)
    run.add_argument("--outcomes", required=True)
    run.add_argument("--methods", type=_methods, default=METHODS)
    run.add_argument("--epsilon", type=float, default=1e-4)
    run.add_argument("--tolerance", type=float, default=1e-9)
    run.add_argument("--max-iters", type=int, default=1_000_000)
    run.add_argument("--bms-clamp", type=float, default=0.01)
    run.add_argument("--report", required=True)
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--renormalize", action="store_true",
                     help="rescale rows that do not sum to one instead of rejecting them")
    run.add_argument("--complement", action="store_true",
                     help="opinions file has only p_1; derive p_2 = 1 - p_1")
    run.add_argument("--trace", action="store_true",
                     help="include the per-game delta trace of the consensual method")

    synth = sub.add_parser("synth", help="write a synthetic binary dataset")
    synth.add_argument("--seed", type=int, required=True)
    synth.add_argument("--games", type=int, default=200)
    synth.add_argument("--experts", type=int, default=100)
    synth.add_argument("--noise", type=float, default=0.05)
    synth.add_argument("--outliers", type=int, default=1)
    synth.add_argument("--out", required=True)

    sub.add_parser("example", help="replay the three-expert worked example")
    return parser


def cmd_run(args) -> int:
    try:
        config = RunConfig(
            methods=args.methods,
            epsilon=args.epsilon,
            tolerance=args.tolerance,
            max_iterations=args.max_iters,
            bms_clamp=args.bms_clamp,
            opinions_path=args.opinions,
            outcomes_path=args.outcomes,
            report_path=args.report,
            report_format=args.format,
            renormalize_inputs=args.renormalize,
            complement=args.complement,
            trace=args.trace,
        )
    except ValueError as exc:
        raise StageError("validate", EXIT_VALIDATE, str(exc)) from exc
    try:
        games = load_dataset(args.opinions, args.outcomes, args.renormalize, args.complement)
    except OSError as exc:
        raise StageError("parse", EXIT_PARSE, str(exc)) from exc
    except ValueError as exc:
        raise StageError("validate", EXIT_VALIDATE, str(exc)) from exc
    try:
        report = run_benchmark(games, config)
    except ValueError as exc:
        raise StageError("pool", EXIT_POOL, str(exc)) from exc
    try:
        written = emit_report(report, args.format, args.report)
    except (OSError, ValueError) as exc:
        raise StageError("emit", EXIT_EMIT, str(exc)) from exc

    for warning in report.warnings:
        print(f"WARNING: {warning}", file=sys.stderr)
    for name, m in report.methods.items():
        acc = "n/a" if m.overall_accuracy is None else f"{m.overall_accuracy:.4f}"
        mae = "n/a" if m.mean_absolute_error is None else (
            f"{m.mean_absolute_error:.4f} ({m.stddev_absolute_error:.4f})")
        print(f"{name:<11} accuracy {acc}  abs.error {mae}  skipped {len(m.skipped_games)}")
    for p in report.pairwise:
        pv = "n/a" if p["p_value"] is None else f"{p['p_value']:.3g}"
        print(f"wilcoxon {p['method_a']} < {p['method_b']}: p = {pv}")
    print("report: " + ", ".join(str(w) for w in written))
    return 0


def cmd_synth(args) -> int:
    try:
        games = synthetic_games(args.seed, args.games, args.experts, args.noise, args.outliers)
    except ValueError as exc:
        raise StageError("validate", EXIT_VALIDATE, str(exc)) from exc
    try:
        paths = write_dataset(games, args.out)
    except OSError as exc:
        raise StageError("emit", EXIT_EMIT, str(exc)) from exc
    print("wrote " + ", ".join(str(p) for p in paths))
    return 0


def example_rows() -> list[tuple[str, float, float, float]]:
    """(quantity, published value, computed value, tolerance) for the worked example."""
    F = EXAMPLE_PANEL
    P = consensual_weights(F, 0.01)
    step = consensual_step(F, 0.01)
    cons = consensual_pool(F, PoolConfig(epsilon=0.01)).consensus
    avg = average_pool(F)
    published_P = [[0.975, 0.011, 0.014], [0.011, 0.931, 0.058], [0.013, 0.058, 0.929]]
    rows = [
        ("D(f1, f2)", 0.85, rmsd(F[0], F[1]), 1e-12),
        ("D(f1, f3)", 0.7, rmsd(F[0], F[2]), 1e-12),
    ]
    for i in range(3):
        for j in range(3):
            rows.append((f"P1[{i + 1},{j + 1}]", published_P[i][j], float(P[i, j]), 1e-3))
    rows += [
        ("f1 after one step [1]", 0.8809, float(step[0, 0]), 1e-3),
        ("f1 after one step [2]", 0.1191, float(step[0, 1]), 1e-3),
        ("consensus [1]", 0.3175, float(cons[0]), 1e-3),
        ("consensus [2]", 0.6825, float(cons[1]), 1e-3),
        ("average [1]", 0.3833, float(avg[0]), 1e-4),
        ("average [2]", 0.6167, float(avg[1]), 1e-4),
    ]
    return rows


def cmd_example(args) -> int:
    ok_all = True
    print(f"{'quantity':<24}{'published':>11}{'computed':>12}{'|diff|':>11}  ok")
    for name, ref, got, tol in example_rows():
        ok = abs(got - ref) <= tol
        ok_all &= ok
        print(f"{name:<24}{ref:>11.4f}{got:>12.6f}{abs(got - ref):>11.2e}  {'yes' if ok else 'NO'}")
    return 0 if ok_all else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": cmd_run, "synth": cmd_synth, "example": cmd_example}[args.command]
    try:
        return handler(args)
    except StageError as exc:
        print(f"pool: error [{exc.stage}]: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
