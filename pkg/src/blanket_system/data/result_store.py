"""
Result Store

Persists ranking/subset outputs and benchmark records.

- Ranking / subset files: JSON objects keyed by variable names.
- Benchmark records: JSON Lines, one record per line, in canonical order.
- Aggregate table: CSV (grid_value, algorithm, metric, mean, ci95).
"""

import json
from pathlib import Path
from typing import Iterable, Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from blanket_system.config.config import CONFIG
from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.evaluation.metrics import aggregate
from blanket_system.logging.logger import get_logger
from blanket_system.schema import DataMatrix
from blanket_system.selection.elimination import Direction, EliminationResult, SubsetResult

logger = get_logger(__name__, CONFIG["logging"]["bench"])


class ResultRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    experiment: str
    algorithm: str
    grid_value: float
    trial: int
    seed: int
    metric: Literal["mean_mb_rank", "accuracy", "error"]
    value: float | None = None
    wall_time_ms: float
    status: Literal["ok", "error"] = "ok"
    message: str | None = None

    @field_validator("value")
    @classmethod
    def _finite(cls, value: float | None) -> float | None:
        if value is not None and not np.isfinite(value):
            raise ValueError("metric value must be finite")
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "ResultRecord":
        if self.status == "ok" and self.value is None:
            raise ValueError("ok records need a value")
        if self.metric == "accuracy" and self.value is not None and not 0.0 <= self.value <= 100.0:
            raise ValueError("accuracy must lie in [0, 100]")
        return self

    def sort_key(self) -> tuple:
        return (self.grid_value, self.algorithm, self.trial, self.metric)


def write_ranking(result: EliminationResult, data: DataMatrix, measure: str, out_path: Path) -> None:
    names = data.column_names
    payload = {
        "target": names[result.target],
        "direction": result.direction.value,
        "measure": measure,
        "order": [names[v] for v in result.order],
        "step_values": [float(v) for v in result.step_values],
    }

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w") as f:
        json.dump(payload, f, indent=2)


def write_subset(subset: SubsetResult, data: DataMatrix, out_path: Path) -> None:
    names = data.column_names
    payload = {
        "target": names[subset.target],
        "members": [names[v] for v in sorted(subset.members)],
    }

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w") as f:
        json.dump(payload, f, indent=2)


def read_selection(path: Path) -> dict:
    """
    Load a ranking or subset file. Rankings carry `order`, subsets carry
    `members`.
    """

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Selection file not found: {path}")

    try:
        with open(path, "r") as f:
            payload = json.load(f)
    except json.JSONDecodeError as e:
        raise BlanketError(ErrorCode.PARSE_ERROR, f"{path}: line {e.lineno}: {e.msg}") from e

    if "target" not in payload or not ("order" in payload or "members" in payload):
        raise BlanketError(ErrorCode.PARSE_ERROR, f"{path}: expected 'target' and 'order' or 'members'")

    return payload


def selection_from_payload(payload: dict, column_names: list[str]) -> EliminationResult | SubsetResult:
    """
    Convert a loaded selection file to index space over `column_names`.
    """

    index = {name: i for i, name in enumerate(column_names)}
    names = payload.get("order", payload.get("members", []))
    unknown = [name for name in [payload["target"], *names] if name not in index]

    if unknown:
        raise BlanketError(ErrorCode.NAME_MISMATCH, f"names not found in truth columns: {unknown}")

    target = index[payload["target"]]

    if "order" in payload:
        steps = payload.get("step_values") or [0.0] * len(names)
        return EliminationResult(
            tuple(index[n] for n in names),
            tuple(float(v) for v in steps),
            Direction(payload.get("direction", "backward")),
            target,
        )

    return SubsetResult(frozenset(index[n] for n in names), target)


def write_records(records: Iterable[ResultRecord], out_path: Path) -> list[ResultRecord]:
    ordered = sorted(records, key=ResultRecord.sort_key)

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    with open(out_path, "w") as f:
        for record in ordered:
            f.write(record.model_dump_json(exclude_none=True) + "\n")

    logger.info(f"{len(ordered)} records written to {out_path}")

    return ordered


def read_records(path: Path) -> list[ResultRecord]:
    with open(path, "r") as f:
        return [ResultRecord.model_validate_json(line) for line in f if line.strip()]


def aggregate_table(records: Iterable[ResultRecord]) -> pd.DataFrame:
    """
    Mean and 95% half-width per (grid_value, algorithm, metric) over the
    successful trials. Groups with a single trial get ci95 = 0.
    """

    rows = [r.model_dump() for r in records if r.status == "ok"]
    columns = ["grid_value", "algorithm", "metric", "mean", "ci95"]

    if not rows:
        return pd.DataFrame(columns=columns)

    df = pd.DataFrame(rows)
    summary = []

    for (grid_value, algorithm, metric), group in df.groupby(["grid_value", "algorithm", "metric"], sort=True):
        scores = group.sort_values("trial")["value"].tolist()

        if len(scores) >= 2:
            stats = aggregate(scores, grid_value)
            mean, ci95 = stats.mean, stats.ci95_half_width
        else:
            mean, ci95 = float(scores[0]), 0.0

        summary.append([grid_value, algorithm, metric, mean, ci95])

    return pd.DataFrame(summary, columns=columns)


def write_aggregate(table: pd.DataFrame, out_path: Path) -> None:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(out_path, index=False, float_format="%.17g", lineterminator="\n")

    logger.info(f"Aggregate table written to {out_path}")
