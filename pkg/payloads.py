"""
Входные данные CLI: CSV с парами меток, JSON с таблицей частот
или JSON с совместным распределением.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import List, Union

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, ValidationError, model_validator

from dist_core import CountTable, JointDistribution, empirical_from_samples
from errors import InputError

logger = logging.getLogger(__name__)


class _MatrixPayload(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    mx: int = Field(ge=2)
    my: int = Field(ge=2)

    def _check_shape(self, rows: list) -> None:
        if len(rows) != self.mx or any(len(row) != self.my for row in rows):
            raise ValueError(
                f"matrix must have {self.mx} rows of {self.my} entries (declared mx, my)"
            )


class CountsPayload(_MatrixPayload):
    counts: List[List[NonNegativeInt]]

    @model_validator(mode="after")
    def _shape(self) -> "CountsPayload":
        self._check_shape(self.counts)
        return self

    def to_count_table(self) -> CountTable:
        return CountTable(self.counts)


class JointPayload(_MatrixPayload):
    probs: List[List[float]]

    @model_validator(mode="after")
    def _shape(self) -> "JointPayload":
        self._check_shape(self.probs)
        return self

    def to_joint(self) -> JointDistribution:
        return JointDistribution(self.probs)


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ())) or "payload"
    return f"{location}: {error.get('msg')}"


def load_json_payload(path: Path) -> Union[CountTable, JointDistribution]:
    """Читает JSON {mx, my, counts} или {mx, my, probs}."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8 (byte {exc.start})") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(raw, dict):
        raise InputError(f"{path}: expected a JSON object")

    try:
        if "counts" in raw:
            return CountsPayload.model_validate(raw).to_count_table()
        if "probs" in raw:
            return JointPayload.model_validate(raw).to_joint()
    except ValidationError as exc:
        raise InputError(f"{path}: {_first_error(exc)}") from exc
    raise InputError(f"{path}: expected a 'counts' or 'probs' matrix")


def load_samples_csv(path: Path, mx: int, my: int) -> CountTable:
    """
    CSV из двух целочисленных столбцов с метками от 1; заголовок необязателен.
    Размеры алфавитов задаются явно: ненаблюдённые категории меняют границы.
    """
    pairs = []
    try:
        with Path(path).open(newline="", encoding="utf-8") as handle:
            for line_no, row in enumerate(csv.reader(handle), start=1):
                if not row or all(not cell.strip() for cell in row):
                    continue
                if len(row) != 2:
                    raise InputError(f"{path}:{line_no}: expected 2 columns, got {len(row)}")
                try:
                    pairs.append((int(row[0]), int(row[1])))
                except ValueError:
                    if line_no == 1 and not pairs:
                        continue  # заголовок
                    raise InputError(f"{path}:{line_no}: labels must be integers") from None
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8 (byte {exc.start})") from exc

    logger.debug("Read %d sample pairs from %s", len(pairs), path)
    return empirical_from_samples(pairs, mx, my)
