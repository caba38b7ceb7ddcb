"""CSV dataset ingestion and JSON/CSV report emission.

Opinions file::

    game_id,expert_id,p_1,...,p_z

Outcomes file::

    game_id,winner

``winner`` is a 1-based outcome index. An expert who did not report on a
game simply has no row for it.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import InvalidOpinionError, renormalize, validate_opinion
from .evaluation import GameRecord


class DatasetError(ValueError):
    def __init__(self, message: str, path=None, line: int | None = None):
        where = f"{path}:{line}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(where + message)
        self.path = path
        self.line = line


def fmt(x: float) -> str:
    """17 significant digits; parses back to the identical float."""
    return format(float(x), ".17g")


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DatasetError("file is empty", path, 1) from None
        rows = [(reader.line_num, row) for row in reader if any(c.strip() for c in row)]
    return header, rows


def _opinion_columns(header, path, complement: bool) -> int:
    if header[:2] != ["game_id", "expert_id"]:
        raise DatasetError("header must start with game_id,expert_id", path, 1)
    probs = header[2:]
    if probs != [f"p_{k}" for k in range(1, len(probs) + 1)]:
        raise DatasetError("probability columns must be named p_1,...,p_z", path, 1)
    if complement and len(probs) != 1:
        raise DatasetError("complement mode expects a single p_1 column", path, 1)
    if not complement and len(probs) < 2:
        raise DatasetError("need at least p_1,p_2 (or use complement mode)", path, 1)
    return len(probs)


def load_dataset(
    opinions_path,
    outcomes_path,
    renormalize_rows: bool = False,
    complement: bool = False,
) -> list[GameRecord]:
    """Join the opinions and outcomes files into one record per game.

    Games keep the order of their first appearance in the opinions file.
    Rows that are not probability vectors abort the load with their line
    number, unless ``renormalize_rows`` is set, in which case non-negative
    rows are rescaled to sum to one. With ``complement`` the opinions file
    carries only ``p_1`` and ``p_2 = 1 - p_1`` is derived.
    """
    header, rows = _read_rows(opinions_path)
    width = _opinion_columns(header, opinions_path, complement)

    panels: dict[str, list] = {}
    seen: set[tuple[str, str]] = set()
    for line, row in rows:
        if len(row) != width + 2:
            raise DatasetError(
                f"expected {width + 2} fields, got {len(row)}", opinions_path, line
            )
        game_id, expert_id = row[0].strip(), row[1].strip()
        if not game_id or not expert_id:
            raise DatasetError("empty game_id or expert_id", opinions_path, line)
        if (game_id, expert_id) in seen:
            raise DatasetError(
                f"duplicate opinion for game {game_id!r}, expert {expert_id!r}",
                opinions_path,
                line,
            )
        seen.add((game_id, expert_id))
        try:
            values = [float(c) for c in row[2:]]
        except ValueError:
            raise DatasetError("non-numeric probability", opinions_path, line) from None
        if complement:
            values = [values[0], 1.0 - values[0]]
        try:
            try:
                f = validate_opinion(values)
            except InvalidOpinionError:
                if not renormalize_rows:
                    raise
                f = renormalize(values)
        except InvalidOpinionError as exc:
            raise DatasetError(f"invalid opinion: {exc}", opinions_path, line) from None
        panels.setdefault(game_id, []).append(f)

    o_header, o_rows = _read_rows(outcomes_path)
    if o_header != ["game_id", "winner"]:
        raise DatasetError("header must be game_id,winner", outcomes_path, 1)
    winners: dict[str, int] = {}
    for line, row in o_rows:
        if len(row) != 2:
            raise DatasetError(f"expected 2 fields, got {len(row)}", outcomes_path, line)
        game_id = row[0].strip()
        if game_id in winners:
            raise DatasetError(f"duplicate outcome for game {game_id!r}", outcomes_path, line)
        try:
            winners[game_id] = int(row[1])
        except ValueError:
            raise DatasetError("winner must be an integer", outcomes_path, line) from None
        if game_id not in panels:
            raise DatasetError(f"game {game_id!r} has no opinions (empty panel)",
                               outcomes_path, line)

    records = []
    for game_id, rows_ in panels.items():
        if game_id not in winners:
            raise DatasetError(f"missing outcome for game {game_id!r}", outcomes_path)
        try:
            records.append(GameRecord(game_id, np.vstack(rows_), winners[game_id]))
        except ValueError as exc:
            raise DatasetError(str(exc), outcomes_path) from None
    return records


def write_dataset(games: Sequence[GameRecord], out_dir) -> tuple[Path, Path]:
    """Write games as ``opinions.csv`` and ``outcomes.csv`` under ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    z = games[0].panel.shape[1] if games else 2
    op_path, oc_path = out / "opinions.csv", out / "outcomes.csv"
    with open(op_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["game_id", "expert_id"] + [f"p_{k}" for k in range(1, z + 1)])
        for g in games:
            for i, f in enumerate(g.panel):
                w.writerow([g.game_id, f"E{i + 1:04d}"] + [fmt(x) for x in f])
    with open(oc_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["game_id", "winner"])
        for g in games:
            w.writerow([g.game_id, g.winner])
    return op_path, oc_path


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return fmt(x)
    return str(x)


SUMMARY_COLUMNS = [
    "record", "method", "method_b", "overall_accuracy", "n_favorite", "n_no_favorite",
    "mean_absolute_error", "stddev_absolute_error", "n_games", "n_skipped",
    "statistic", "p_value", "n", "exact", "note",
]


def emit_report(report, report_format: str, path) -> list[Path]:
    """Write ``report`` as JSON, or as CSV plus a ``<stem>.summary.csv`` footer file.

    Returns the paths written.
    """
    if report_format not in ("json", "csv"):
        raise ValueError(f"unknown report format {report_format!r}")
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise OSError(f"cannot write report to {path}")
    data = report.to_dict()

    if report_format == "json":
        # Python's float repr is the shortest string that round-trips exactly
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(data, fh, indent=2, allow_nan=False)
            fh.write("\n")
        return [path]

    z = max(
        (len(g["aggregate"]) for m in data["methods"].values() for g in m["per_game"]),
        default=2,
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["game_id", "method"] + [f"p_{k}" for k in range(1, z + 1)]
                   + ["absolute_error"])
        by_game = {
            name: {g["game_id"]: g for g in m["per_game"]}
            for name, m in data["methods"].items()
        }
        for gid in report.game_ids:
            for name, games in by_game.items():
                g = games.get(gid)
                if g is not None:
                    w.writerow([gid, name] + [fmt(x) for x in g["aggregate"]]
                               + [fmt(g["absolute_error"])])
    summary = path.with_name(path.stem + ".summary.csv")
    with open(summary, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for name, m in data["methods"].items():
            row = dict(record="method", method=name, **m["metrics"])
            w.writerow([_cell(row.get(c)) for c in SUMMARY_COLUMNS])
        for p in data["pairwise_wilcoxon"]:
            row = dict(p, record="wilcoxon", method=p["method_a"])
            w.writerow([_cell(row.get(c)) for c in SUMMARY_COLUMNS])
    return [path, summary]
