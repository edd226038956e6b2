"""
Доверительные интервалы для взаимной информации и расчёт объёма выборки.

interval_thm2 — интервал ширины 2·ΔI(ε), не зависящей от данных.
interval_thm4 — интервал из оптимизации энтропий по шарам вокруг
эмпирических распределений (X, Y и XY) с тем же ε.
sample_size_thm3 — минимальное n, при котором полуширина не больше γ.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

from scipy.optimize import bisect

from bounds import (
    AlphabetPair,
    ConfidenceQuery,
    delta_I,
    delta_I_branch_one,
    epsilon_for_confidence,
    log_tail_prefactor,
)
from dist_core import CountTable, UnitTag, marginals, mutual_information, to_distribution
from entropy_opt import EntropyBallSolution, max_entropy_in_ball, min_entropy_in_ball
from errors import DomainError

logger = logging.getLogger(__name__)

BISECTION_XTOL = 1e-12
BISECTION_MAXITER = 200


class IntervalMethod(str, Enum):
    THM2 = "thm2"
    THM4 = "thm4"


@dataclass(frozen=True, slots=True)
class Interval:
    lower: float
    upper: float
    unit: UnitTag
    method: IntervalMethod
    epsilon_used: float
    alpha: float

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(
                f"interval lower bound {self.lower!r} exceeds upper bound {self.upper!r}"
            )
        if not self.epsilon_used > 0.0:
            raise ValueError(f"epsilon_used must be > 0, got {self.epsilon_used!r}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_unit(self, unit: UnitTag | str) -> "Interval":
        unit = UnitTag.parse(unit)
        if unit is self.unit:
            return self
        lower_nats = self.unit.to_nats(self.lower)
        upper_nats = self.unit.to_nats(self.upper)
        return replace(
            self, lower=unit.convert(lower_nats), upper=unit.convert(upper_nats), unit=unit
        )


@dataclass(frozen=True, slots=True)
class SampleSizePlan:
    n_required: int
    epsilon_solved: float
    gamma: float
    alpha: float


@dataclass(frozen=True, slots=True)
class EntropyBounds:
    """Решения шести задач оптимизации энтропии в ориентации вызывающего."""

    x_min: EntropyBallSolution
    x_max: EntropyBallSolution
    y_min: EntropyBallSolution
    y_max: EntropyBallSolution
    joint_min: EntropyBallSolution
    joint_max: EntropyBallSolution
    epsilon: float

    @property
    def i_min(self) -> float:
        return self.x_min.value + self.y_min.value - self.joint_max.value

    @property
    def i_max(self) -> float:
        return self.x_max.value + self.y_max.value - self.joint_min.value


def _oriented(counts: CountTable) -> tuple[CountTable, AlphabetPair]:
    """Транспонирует таблицу при mx > my, чтобы всегда было mx ≤ my."""
    alphabet = AlphabetPair.from_sizes(counts.mx, counts.my)
    if alphabet.swapped:
        logger.debug("Transposing %dx%d count table so that mx <= my", counts.mx, counts.my)
        return counts.transposed(), alphabet
    return counts, alphabet


def _epsilon(counts: CountTable, alphabet: AlphabetPair, alpha: float) -> float:
    return epsilon_for_confidence(ConfidenceQuery(alpha=alpha, n=counts.n, alphabet=alphabet))


def _finish(
    lower_nats: float,
    upper_nats: float,
    *,
    alphabet: AlphabetPair,
    method: IntervalMethod,
    epsilon: float,
    alpha: float,
    unit: UnitTag | str,
    clamp: bool,
) -> Interval:
    if clamp:
        lower_nats = max(lower_nats, 0.0)
        upper_nats = min(upper_nats, math.log(alphabet.mx))
    unit = UnitTag.parse(unit)
    return Interval(
        lower=unit.convert(lower_nats),
        upper=unit.convert(upper_nats),
        unit=unit,
        method=method,
        epsilon_used=epsilon,
        alpha=alpha,
    )


def interval_thm2(
    counts: CountTable,
    alpha: float,
    unit: UnitTag | str = UnitTag.BITS,
    clamp: bool = False,
) -> Interval:
    """[I(emp) − ΔI(ε), I(emp) + ΔI(ε)]; без clamp нижняя граница может быть отрицательной."""
    oriented, alphabet = _oriented(counts)
    epsilon = _epsilon(oriented, alphabet, alpha)
    estimate = mutual_information(to_distribution(oriented))
    half_width = delta_I(epsilon, alphabet)
    return _finish(
        estimate - half_width,
        estimate + half_width,
        alphabet=alphabet,
        method=IntervalMethod.THM2,
        epsilon=epsilon,
        alpha=alpha,
        unit=unit,
        clamp=clamp,
    )


def entropy_bounds(counts: CountTable, alpha: float) -> EntropyBounds:
    """
    Экстремумы H(X), H(Y), H(XY) по ε-шарам вокруг эмпирических распределений.
    Маргинальные шары используют тот же ε: V маргиналов не больше V совместных.
    """
    oriented, alphabet = _oriented(counts)
    epsilon = _epsilon(oriented, alphabet, alpha)
    empirical = to_distribution(oriented)
    p_x, p_y = marginals(empirical)
    shape = empirical.probs.shape

    joint_min = min_entropy_in_ball(empirical.probs, epsilon)
    joint_max = max_entropy_in_ball(empirical.probs, epsilon)
    joint_min = replace(joint_min, argopt=joint_min.argopt.reshape(shape))
    joint_max = replace(joint_max, argopt=joint_max.argopt.reshape(shape))
    x_min, x_max = min_entropy_in_ball(p_x.probs, epsilon), max_entropy_in_ball(p_x.probs, epsilon)
    y_min, y_max = min_entropy_in_ball(p_y.probs, epsilon), max_entropy_in_ball(p_y.probs, epsilon)

    if alphabet.swapped:
        x_min, x_max, y_min, y_max = y_min, y_max, x_min, x_max
        joint_min = replace(joint_min, argopt=joint_min.argopt.T)
        joint_max = replace(joint_max, argopt=joint_max.argopt.T)

    return EntropyBounds(
        x_min=x_min,
        x_max=x_max,
        y_min=y_min,
        y_max=y_max,
        joint_min=joint_min,
        joint_max=joint_max,
        epsilon=epsilon,
    )


def interval_thm4(
    counts: CountTable,
    alpha: float,
    unit: UnitTag | str = UnitTag.BITS,
    clamp: bool = False,
) -> Interval:
    """[I_min, I_max] из оптимизации энтропий по ε-шарам."""
    bounds = entropy_bounds(counts, alpha)
    return _finish(
        bounds.i_min,
        bounds.i_max,
        alphabet=AlphabetPair.from_sizes(counts.mx, counts.my),
        method=IntervalMethod.THM4,
        epsilon=bounds.epsilon,
        alpha=alpha,
        unit=unit,
        clamp=clamp,
    )


def interval(
    counts: CountTable,
    alpha: float,
    method: IntervalMethod | str,
    unit: UnitTag | str = UnitTag.BITS,
    clamp: bool = False,
) -> Interval:
    method = IntervalMethod(method)
    if method is IntervalMethod.THM2:
        return interval_thm2(counts, alpha, unit=unit, clamp=clamp)
    return interval_thm4(counts, alpha, unit=unit, clamp=clamp)


def sample_size_thm3(gamma: float, alpha: float, alphabet: AlphabetPair) -> SampleSizePlan:
    """
    Объём выборки, при котором интервал полуширины γ (наты) имеет уровень 1 − α.
    ε — единственный корень ΔI(ε) = γ на (0, 2 − 2/mx): первая ветвь строго возрастает.
    """
    log_mx = math.log(alphabet.mx)
    if math.isnan(gamma) or gamma <= 0.0:
        raise DomainError("gamma", gamma, f"gamma must be > 0, got {gamma!r}")
    if gamma >= log_mx:
        raise DomainError(
            "gamma",
            gamma,
            f"gamma must be < log(mx)={log_mx:.6g} nats; wider intervals hold trivially",
        )
    if not (0.0 < alpha <= 1.0):
        raise DomainError("alpha", alpha, f"alpha must lie in (0, 1], got {alpha!r}")

    upper = 2.0 - 2.0 / alphabet.mx
    if delta_I_branch_one(upper, alphabet) < gamma:
        raise DomainError(
            "gamma", gamma, f"no root of delta_I = {gamma!r} below epsilon = {upper!r}"
        )

    epsilon = bisect(
        lambda e: delta_I_branch_one(e, alphabet) - gamma,
        0.0,
        upper,
        xtol=BISECTION_XTOL,
        maxiter=BISECTION_MAXITER,
    )
    log_ratio = log_tail_prefactor(alphabet.cells) - math.log(alpha)
    n_required = max(1, math.ceil(2.0 / (epsilon * epsilon) * log_ratio))
    logger.debug("gamma=%.12g -> epsilon=%.12g, n=%d", gamma, epsilon, n_required)
    return SampleSizePlan(n_required=n_required, epsilon_solved=epsilon, gamma=gamma, alpha=alpha)
