"""
Monte Carlo-харнесс: модель канала, сэмплирование таблиц частот,
выборочная функция распределения plug-in оценки MI, квантили и
проверка покрытия доверительных интервалов.

Каждая реплика r берёт свой поток PCG64 из SeedSequence(seed, spawn_key=(r,)),
поэтому результат не зависит ни от числа потоков, ни от порядка выполнения.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np

from config import CHUNK_SIZE, WORKERS
from dist_core import (
    CountTable,
    JointDistribution,
    MarginalDistribution,
    UnitTag,
    mutual_information,
    mutual_information_many,
)
from errors import DomainError, InputError
from intervals import IntervalMethod, interval

logger = logging.getLogger(__name__)

GENERATOR_ID = f"numpy-{np.__version__}/PCG64/SeedSequence(seed,spawn_key=(replicate,))"
QUANTILE_CONVENTION = "type-1 lower order statistic: index ceil(q*reps)-1"


class ChannelKind(str, Enum):
    BSC = "bsc"


@dataclass(frozen=True, slots=True, eq=False)
class ChannelSpec:
    """Канал с входным распределением; пока поддерживается только BSC."""

    ber: float
    input_dist: MarginalDistribution
    kind: ChannelKind = ChannelKind.BSC

    def __post_init__(self) -> None:
        if not (0.0 <= self.ber <= 0.5):
            raise DomainError("ber", self.ber, f"BER must lie in [0, 0.5], got {self.ber!r}")
        if not isinstance(self.input_dist, MarginalDistribution):
            object.__setattr__(self, "input_dist", MarginalDistribution(self.input_dist))
        if self.kind is ChannelKind.BSC and self.input_dist.size != 2:
            raise InputError(
                f"BSC input distribution must have 2 symbols, got {self.input_dist.size}"
            )


@dataclass(frozen=True, slots=True, eq=False)
class SamplingCdf:
    values: np.ndarray
    n_per_rep: int
    reps: int
    seed: int
    generator_id: str = GENERATOR_ID

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise InputError("sampling cdf needs a nonempty vector of values")
        if values.size != self.reps:
            raise InputError(f"sampling cdf has {values.size} values for {self.reps} replicates")
        values.sort()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def bsc_joint(spec: ChannelSpec) -> JointDistribution:
    """p(i, j) = p_X(i)·(1 − BER) при i = j и p_X(i)·BER иначе."""
    transition = np.array([[1.0 - spec.ber, spec.ber], [spec.ber, 1.0 - spec.ber]])
    return JointDistribution(spec.input_dist.probs[:, None] * transition)


def replicate_generator(seed: int, replicate: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(replicate,))
    return np.random.Generator(np.random.PCG64(sequence))


def sample_counts(j: JointDistribution, n: int, seed: int) -> CountTable:
    """Одна мультиномиальная выборка объёма n (не n категориальных)."""
    if n < 1:
        raise DomainError("n", n, f"sample size n must be >= 1, got {n!r}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    counts = rng.multinomial(n, j.probs.ravel())
    return CountTable(counts.reshape(j.probs.shape))


def _draw_chunk(flat: np.ndarray, n: int, seed: int, start: int, stop: int) -> np.ndarray:
    rows = np.empty((stop - start, flat.size), dtype=np.int64)
    for offset, replicate in enumerate(range(start, stop)):
        rows[offset] = replicate_generator(seed, replicate).multinomial(n, flat)
    return rows


def draw_replicates(
    j: JointDistribution,
    n: int,
    reps: int,
    seed: int,
    workers: int | None = None,
    chunk_size: int | None = None,
) -> np.ndarray:
    """
    Таблицы частот всех реплик, массив формы (reps, Mx, My), в порядке номеров реплик.
    Чанки реплик обрабатываются пулом потоков; слияние по номеру чанка.
    """
    if n < 1:
        raise DomainError("n", n, f"sample size n must be >= 1, got {n!r}")
    if reps < 1:
        raise DomainError("reps", reps, f"number of replicates must be >= 1, got {reps!r}")
    workers = workers or WORKERS
    chunk_size = chunk_size or CHUNK_SIZE
    flat = j.probs.ravel()
    bounds = [(start, min(start + chunk_size, reps)) for start in range(0, reps, chunk_size)]

    logger.info(
        "Drawing %d replicates of n=%d in %d chunks on %d workers", reps, n, len(bounds), workers
    )
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_draw_chunk, flat, n, seed, start, stop) for start, stop in bounds]
        chunks = []
        for index, future in enumerate(futures):
            chunks.append(future.result())
            logger.debug("Chunk %d/%d done", index + 1, len(futures))
    return np.concatenate(chunks).reshape(reps, *j.probs.shape)


def sampling_cdf(
    j: JointDistribution,
    n: int,
    reps: int,
    seed: int,
    workers: int | None = None,
    chunk_size: int | None = None,
) -> SamplingCdf:
    """Выборочная функция распределения plug-in оценки MI (наты) по reps репликам."""
    tables = draw_replicates(j, n, reps, seed, workers=workers, chunk_size=chunk_size)
    values = mutual_information_many(tables / n)
    return SamplingCdf(values=values, n_per_rep=n, reps=reps, seed=seed)


def quantile(c: SamplingCdf, q: float) -> float:
    """Квантиль по нижней порядковой статистике: элемент с индексом ⌈q·reps⌉ − 1."""
    if math.isnan(q) or not (0.0 <= q <= 1.0):
        raise DomainError("q", q, f"quantile level must lie in [0, 1], got {q!r}")
    index = math.ceil(q * c.reps) - 1
    index = min(max(index, 0), c.reps - 1)
    return float(c.values[index])


def best_possible_interval(c: SamplingCdf, alpha: float) -> Tuple[float, float]:
    """Приближение к самому узкому интервалу: α/2- и (1 − α/2)-квантили."""
    if not (0.0 < alpha <= 1.0):
        raise DomainError("alpha", alpha, f"alpha must lie in (0, 1], got {alpha!r}")
    return quantile(c, alpha / 2.0), quantile(c, 1.0 - alpha / 2.0)


def cdf_lines(c: SamplingCdf, unit: UnitTag | str = UnitTag.BITS) -> List[str]:
    """Два столбца через пробел: значение MI и уровень эмпирической CDF."""
    unit = UnitTag.parse(unit)
    lines = [f"mi_{unit.value} cdf"]
    for index, value in enumerate(c.values, start=1):
        lines.append(f"{unit.convert(float(value)):.10g} {index / c.reps:.10g}")
    return lines


def coverage_experiment(
    j: JointDistribution,
    n: int,
    reps: int,
    alpha: float,
    method: IntervalMethod | str,
    seed: int,
    workers: int | None = None,
) -> float:
    """Доля реплик, чей интервал накрывает истинную MI распределения j."""
    method = IntervalMethod(method)
    truth = mutual_information(j)
    tables = draw_replicates(j, n, reps, seed, workers=workers)
    hits = 0
    for table in tables:
        if interval(CountTable(table), alpha, method, unit=UnitTag.NATS).contains(truth):
            hits += 1
    coverage = hits / reps
    logger.info("Coverage of %s at n=%d over %d replicates: %.6f", method.value, n, reps, coverage)
    return coverage


# Два числовых примера: канал и зафиксированная эмпирическая таблица n = 10^5
EXAMPLE_CHANNELS: Dict[int, Tuple[float, Sequence[float]]] = {
    1: (0.1, (0.5, 0.5)),
    2: (0.2, (0.1, 0.9)),
}

EXAMPLE_COUNTS: Dict[int, Tuple[Tuple[int, int], Tuple[int, int]]] = {
    1: ((44950, 5058), (4868, 45124)),
    2: ((7996, 2023), (18012, 71969)),
}


def example_channel(example: int) -> ChannelSpec:
    if example not in EXAMPLE_CHANNELS:
        raise InputError(f"unknown example {example!r}; expected one of {sorted(EXAMPLE_CHANNELS)}")
    ber, input_dist = EXAMPLE_CHANNELS[example]
    return ChannelSpec(ber=ber, input_dist=MarginalDistribution(input_dist))


def example_empirical_counts(example: int) -> CountTable:
    if example not in EXAMPLE_COUNTS:
        raise InputError(f"unknown example {example!r}; expected one of {sorted(EXAMPLE_COUNTS)}")
    return CountTable(np.array(EXAMPLE_COUNTS[example]))
