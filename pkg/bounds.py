"""
Аналитические оценки: граница разности взаимной информации ΔI(ε),
исходная граница Чжана для сравнения, хвостовая оценка отклонения
эмпирического распределения и перевод ε ↔ α.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from dist_core import LN2, binary_entropy
from errors import DomainError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class AlphabetPair:
    """Размеры алфавитов, всегда mx ≤ my; swapped: были ли переставлены X и Y."""

    mx: int
    my: int
    swapped: bool = False

    def __post_init__(self) -> None:
        if self.mx < 2 or self.my < 2:
            raise DomainError("alphabet", (self.mx, self.my), "alphabet sizes must be >= 2")
        if self.mx > self.my:
            raise DomainError(
                "alphabet",
                (self.mx, self.my),
                "mx must not exceed my; build the pair with AlphabetPair.from_sizes",
            )

    @classmethod
    def from_sizes(cls, mx: int, my: int) -> "AlphabetPair":
        """MI симметрична, поэтому при mx > my переменные просто меняются местами."""
        if mx > my:
            return cls(mx=my, my=mx, swapped=True)
        return cls(mx=mx, my=my)

    @property
    def cells(self) -> int:
        return self.mx * self.my


@dataclass(frozen=True, slots=True)
class ConfidenceQuery:
    alpha: float
    n: int
    alphabet: AlphabetPair

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError("alpha", self.alpha, f"alpha must lie in (0, 1], got {self.alpha!r}")
        if self.n < 1:
            raise DomainError("n", self.n, f"sample size n must be >= 1, got {self.n!r}")


def log_tail_prefactor(cells: int) -> float:
    """ln(2^cells − 2) без переполнения при больших алфавитах."""
    return cells * LN2 + math.log1p(-math.ldexp(1.0, 1 - cells))


def _check_epsilon(epsilon: float) -> None:
    if math.isnan(epsilon) or epsilon < 0.0:
        raise DomainError("epsilon", epsilon, f"epsilon must be >= 0, got {epsilon!r}")


def delta_I_branch_one(epsilon: float, alphabet: AlphabetPair) -> float:
    """Первая ветвь ΔI без проверки границы ε ≤ 2 − 2/mx."""
    half = epsilon / 2.0
    product = (alphabet.cells - 1) * (alphabet.mx - 1) * (alphabet.my - 1)
    return half * math.log(product) + 3.0 * binary_entropy(half)


def delta_I(epsilon: float, alphabet: AlphabetPair) -> float:
    """
    Максимальная разность взаимной информации двух совместных распределений
    на вариационном расстоянии не больше ε (наты).

    Граница ε = 2 − 2/mx относится к первой ветви. Минимум с ln(mx) в первой
    ветви намеренно не берётся.
    """
    _check_epsilon(epsilon)
    if epsilon > 2.0 - 2.0 / alphabet.mx:
        return math.log(alphabet.mx)
    return delta_I_branch_one(epsilon, alphabet)


def zhang_validity_limit(alphabet: AlphabetPair) -> float:
    return 2.0 - 2.0 / alphabet.cells


def delta_I_zhang(epsilon: float, alphabet: AlphabetPair) -> float:
    """Исходная граница Чжана, определена только при ε ≤ 2 − 2/(mx·my)."""
    _check_epsilon(epsilon)
    limit = zhang_validity_limit(alphabet)
    if epsilon > limit:
        raise DomainError(
            "epsilon",
            epsilon,
            f"Zhang bound requires 0 <= epsilon <= 2 - 2/(mx*my) = {limit!r}, got {epsilon!r}",
        )
    half = epsilon / 2.0
    return 3.0 * half * math.log(alphabet.cells - 1) + 3.0 * binary_entropy(half)


def weissman_tail(n: int, epsilon: float, alphabet: AlphabetPair) -> float:
    """
    Верхняя оценка Pr{V(p, p_n) > ε} = (2^(mx·my) − 2)·exp(−n ε²/2).
    Это оценка, а не вероятность: значение может превышать 1.
    """
    if n < 1:
        raise DomainError("n", n, f"sample size n must be >= 1, got {n!r}")
    if math.isnan(epsilon) or epsilon <= 0.0:
        raise DomainError("epsilon", epsilon, f"epsilon must be > 0, got {epsilon!r}")
    exponent = log_tail_prefactor(alphabet.cells) - n * epsilon * epsilon / 2.0
    try:
        return math.exp(exponent)
    except OverflowError:
        return math.inf


def epsilon_for_confidence(q: ConfidenceQuery) -> float:
    """ε = sqrt((2/n) · ln((2^(mx·my) − 2)/α)); обращает weissman_tail по ε."""
    log_ratio = log_tail_prefactor(q.alphabet.cells) - math.log(q.alpha)
    epsilon = math.sqrt(2.0 / q.n * log_ratio)
    if is_vacuous(epsilon):
        logger.debug("epsilon=%.6g >= 2 for n=%d: concentration bound is vacuous", epsilon, q.n)
    return epsilon


def is_vacuous(epsilon: float) -> bool:
    """Шар радиуса ε ≥ 2 покрывает весь симплекс: оценка ничего не утверждает."""
    return epsilon >= 2.0


@dataclass(frozen=True, slots=True)
class BoundRow:
    epsilon: float
    delta: float
    delta_zhang: Optional[float] = None


def parse_grid(spec: str) -> tuple[float, float, int]:
    """Разбирает сетку вида start:stop:count."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError(f"malformed grid {spec!r}; expected start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"malformed grid {spec!r}; expected start:stop:count") from None
    return start, stop, count


def bound_grid(
    start: float,
    stop: float,
    count: int,
    alphabet: AlphabetPair,
    compare_zhang: bool = False,
) -> List[BoundRow]:
    """Таблица ΔI(ε) (и, по запросу, границы Чжана) на равномерной сетке ε."""
    if count < 1:
        raise InputError(f"grid count must be >= 1, got {count}")
    if not (0.0 <= start <= 2.0 and 0.0 <= stop <= 2.0) or start > stop:
        raise InputError(f"grid must satisfy 0 <= start <= stop <= 2, got {start}:{stop}")

    rows = []
    limit = zhang_validity_limit(alphabet)
    for epsilon in np.linspace(start, stop, count):
        epsilon = float(epsilon)
        zhang = None
        if compare_zhang and epsilon <= limit:
            zhang = delta_I_zhang(epsilon, alphabet)
        rows.append(BoundRow(epsilon=epsilon, delta=delta_I(epsilon, alphabet), delta_zhang=zhang))
    return rows
