"""
Распределения на конечных алфавитах и информационные функционалы:
энтропия, бинарная энтропия, взаимная информация, вариационное расстояние,
маргиналы и эмпирическое совместное распределение.

Внутренняя единица везде — наты. Перевод в биты выполняется только
при выводе результата (см. UnitTag).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.special import entr

from errors import DomainError, InputError, ProbabilityValidationError

logger = logging.getLogger(__name__)

# Допуск на сумму вероятностей; входы в пределах допуска перенормируются
PROB_TOLERANCE = 1e-12
# Отрицательные значения MI в [-MI_CLAMP_TOLERANCE, 0) считаются ошибкой округления
MI_CLAMP_TOLERANCE = 1e-12
LN2 = math.log(2.0)


class UnitTag(str, Enum):
    NATS = "nats"
    BITS = "bits"

    def convert(self, value_nats: float) -> float:
        """Переводит значение из натов в эту единицу."""
        if self is UnitTag.BITS:
            return to_bits(value_nats)
        return value_nats

    def to_nats(self, value: float) -> float:
        """Переводит значение в этой единице обратно в наты."""
        if self is UnitTag.BITS:
            return from_bits(value)
        return value

    @classmethod
    def parse(cls, value: "str | UnitTag") -> "UnitTag":
        if isinstance(value, UnitTag):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise InputError(f"Unknown unit {value!r}; expected 'bits' or 'nats'") from None


def to_bits(value_nats: float) -> float:
    return value_nats / LN2


def from_bits(value_bits: float) -> float:
    return value_bits * LN2


def validate_probabilities(values: "Sequence[float] | np.ndarray", name: str = "p") -> np.ndarray:
    """
    Проверяет, что values — распределение вероятностей (любой размерности),
    и возвращает перенормированную копию только для чтения.
    """
    probs = np.array(values, dtype=np.float64)
    if probs.size == 0:
        raise ProbabilityValidationError(f"{name}: empty probability array")
    if not np.all(np.isfinite(probs)):
        raise ProbabilityValidationError(f"{name}: non-finite entries")
    if np.any(probs < 0.0):
        index = tuple(int(i) for i in np.argwhere(probs < 0.0)[0])
        raise ProbabilityValidationError(f"{name}: negative entry at index {index}")
    if np.any(probs > 1.0 + PROB_TOLERANCE):
        raise ProbabilityValidationError(f"{name}: entry greater than 1")
    total = float(probs.sum())
    if abs(total - 1.0) > PROB_TOLERANCE:
        raise ProbabilityValidationError(f"{name}: entries sum to {total!r}, expected 1")
    probs /= total
    probs.setflags(write=False)
    return probs


@dataclass(frozen=True, slots=True, eq=False)
class MarginalDistribution:
    """Распределение одной величины: вектор длины M."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = validate_probabilities(self.probs, name="marginal")
        if probs.ndim != 1:
            raise ProbabilityValidationError(
                f"marginal: expected a vector, got shape {probs.shape}"
            )
        object.__setattr__(self, "probs", probs)

    @property
    def size(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True, slots=True, eq=False)
class JointDistribution:
    """Совместное распределение p_XY: матрица Mx×My."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = validate_probabilities(self.probs, name="joint")
        if probs.ndim != 2:
            raise ProbabilityValidationError(f"joint: expected a matrix, got shape {probs.shape}")
        if probs.shape[0] < 2 or probs.shape[1] < 2:
            raise ProbabilityValidationError(
                f"joint: alphabet sizes must be >= 2, got {probs.shape}"
            )
        object.__setattr__(self, "probs", probs)

    @property
    def mx(self) -> int:
        return int(self.probs.shape[0])

    @property
    def my(self) -> int:
        return int(self.probs.shape[1])

    def transposed(self) -> "JointDistribution":
        return JointDistribution(self.probs.T)


@dataclass(frozen=True, slots=True, eq=False)
class CountTable:
    """Таблица частот Mx×My по n наблюдениям."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        raw = np.asarray(self.counts)
        if raw.ndim != 2:
            raise InputError(f"counts: expected a matrix, got shape {raw.shape}")
        if raw.shape[0] < 2 or raw.shape[1] < 2:
            raise InputError(f"counts: alphabet sizes must be >= 2, got {raw.shape}")
        if raw.dtype.kind == "f":
            if not np.all(np.isfinite(raw)) or not np.all(raw == np.round(raw)):
                raise InputError("counts: entries must be integers")
        elif raw.dtype.kind not in "iu":
            raise InputError(f"counts: unsupported dtype {raw.dtype}")
        counts = raw.astype(np.int64)
        if np.any(counts < 0):
            raise InputError("counts: entries must be nonnegative")
        if int(counts.sum()) < 1:
            raise InputError("counts: total sample count n must be >= 1")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def mx(self) -> int:
        return int(self.counts.shape[0])

    @property
    def my(self) -> int:
        return int(self.counts.shape[1])

    def transposed(self) -> "CountTable":
        return CountTable(self.counts.T)


def _as_probability_array(value, name: str) -> np.ndarray:
    if isinstance(value, (JointDistribution, MarginalDistribution)):
        return value.probs
    return validate_probabilities(value, name=name)


def entropy(p: "Sequence[float] | np.ndarray | MarginalDistribution | JointDistribution") -> float:
    """Энтропия Шеннона в натах; 0·ln 0 = 0 (scipy.special.entr)."""
    probs = _as_probability_array(p, "p")
    return float(entr(probs).sum())


def binary_entropy(x: float) -> float:
    """Бинарная энтропия в натах, на концах отрезка равна нулю."""
    if not (0.0 <= x <= 1.0):
        raise DomainError("x", x, f"binary entropy is defined on [0, 1], got {x!r}")
    return float(entr(x) + entr(1.0 - x))


def marginals(j: JointDistribution) -> Tuple[MarginalDistribution, MarginalDistribution]:
    """Маргиналы p_X (суммы по строкам) и p_Y (суммы по столбцам)."""
    return MarginalDistribution(j.probs.sum(axis=1)), MarginalDistribution(j.probs.sum(axis=0))


def mutual_information(j: JointDistribution) -> float:
    """I = H(X) + H(Y) − H(XY) в натах."""
    p_x, p_y = marginals(j)
    value = entropy(p_x) + entropy(p_y) - entropy(j)
    if -MI_CLAMP_TOLERANCE <= value < 0.0:
        return 0.0
    return value


def mutual_information_many(probs: np.ndarray) -> np.ndarray:
    """
    Взаимная информация для стека совместных распределений формы (k, Mx, My).
    Без валидации: используется Monte Carlo-харнессом на частотах counts / n.
    """
    h_xy = entr(probs).sum(axis=(1, 2))
    h_x = entr(probs.sum(axis=2)).sum(axis=1)
    h_y = entr(probs.sum(axis=1)).sum(axis=1)
    values = h_x + h_y - h_xy
    return np.where((values < 0.0) & (values >= -MI_CLAMP_TOLERANCE), 0.0, values)


def variational_distance(a, b) -> float:
    """L1-расстояние между двумя распределениями одной формы, лежит в [0, 2]."""
    left = _as_probability_array(a, "a")
    right = _as_probability_array(b, "b")
    if left.shape != right.shape:
        raise InputError(f"shape mismatch: {left.shape} vs {right.shape}")
    return float(np.abs(left - right).sum())


def product_distribution(p_x, p_y) -> JointDistribution:
    """Совместное распределение независимых X и Y."""
    outer = np.outer(_as_probability_array(p_x, "p_x"), _as_probability_array(p_y, "p_y"))
    return JointDistribution(outer)


def empirical_from_samples(pairs: Iterable[Tuple[int, int]], mx: int, my: int) -> CountTable:
    """
    Считает таблицу частот по последовательности пар меток (x, y).
    Метки нумеруются с единицы: x ∈ {1..mx}, y ∈ {1..my}.
    """
    if mx < 2 or my < 2:
        raise InputError(f"alphabet sizes must be >= 2, got mx={mx}, my={my}")
    labels = np.asarray(list(pairs), dtype=np.int64)
    if labels.size == 0:
        raise InputError("no samples given; n must be >= 1")
    if labels.ndim != 2 or labels.shape[1] != 2:
        raise InputError("samples must be a sequence of (x, y) pairs")

    bad_x = (labels[:, 0] < 1) | (labels[:, 0] > mx)
    bad_y = (labels[:, 1] < 1) | (labels[:, 1] > my)
    bad = np.flatnonzero(bad_x | bad_y)
    if bad.size:
        index = int(bad[0])
        x, y = (int(v) for v in labels[index])
        raise InputError(f"sample {index}: label pair ({x}, {y}) outside alphabet {mx}x{my}")

    counts = np.zeros((mx, my), dtype=np.int64)
    np.add.at(counts, (labels[:, 0] - 1, labels[:, 1] - 1), 1)
    logger.debug("Built %dx%d count table from %d samples", mx, my, labels.shape[0])
    return CountTable(counts)


def to_distribution(c: CountTable) -> JointDistribution:
    """Эмпирическое совместное распределение counts / n."""
    if c.n < 1:
        raise InputError("count table is empty (n = 0)")
    return JointDistribution(c.counts / c.n)
