"""
JSON-отчёты CLI (схема miconf/1).
Вычисления идут в полной точности; округление до значащих цифр — только при выводе.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from config import REPORT_SCHEMA, TOOL_VERSION


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class Metadata(BaseModel):
    generated_at: str = Field(default_factory=_now)
    tool_version: str = TOOL_VERSION
    generator_id: Optional[str] = None
    quantile_convention: Optional[str] = None


class _Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=REPORT_SCHEMA, serialization_alias="schema")
    command: str
    unit: str
    metadata: Metadata = Field(default_factory=Metadata)


class IntervalRow(BaseModel):
    method: str
    lower: float
    upper: Optional[float] = None
    width: Optional[float] = None


class IntervalReport(_Report):
    command: str = "interval"
    n: int
    mx: int
    my: int
    alpha: float
    epsilon: float
    vacuous: bool
    clamp: bool
    mi_empirical: float
    intervals: List[IntervalRow]


class SampleSizeReport(_Report):
    command: str = "samplesize"
    gamma: float
    alpha: float
    mx: int
    my: int
    epsilon: float
    n_required: int


class SimulationReport(_Report):
    command: str = "simulate"
    channel: str
    ber: float
    px: float
    n: int
    reps: int
    alpha: float
    true_mi: float
    quantile_lower: float
    quantile_upper: float
    width: float
    seed: int
    generator_id: str


class ReproductionReport(_Report):
    command: str = "reproduce"
    example: int
    ber: float
    px: List[float]
    n: int
    reps: int
    alpha: float
    seed: int
    true_mi: float
    empirical_counts: List[List[int]]
    mi_empirical: float
    rows: List[IntervalRow]


def round_significant(value: float, digits: int) -> float:
    return float(f"{value:.{digits}g}")


def _round_tree(node: Any, digits: int) -> Any:
    if isinstance(node, float):
        return round_significant(node, digits)
    if isinstance(node, dict):
        return {key: _round_tree(value, digits) for key, value in node.items()}
    if isinstance(node, list):
        return [_round_tree(value, digits) for value in node]
    return node


def render(report: BaseModel, precision: int) -> str:
    data = report.model_dump(mode="json", by_alias=True)
    return json.dumps(_round_tree(data, precision), indent=2, ensure_ascii=False)
