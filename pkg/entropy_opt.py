"""
Минимум и максимум энтропии на пересечении симплекса с шаром
вариационного расстояния вокруг заданного (эмпирического) распределения.

Максимум — «заливка»: большие компоненты срезаются до уровня c,
малые поднимаются до уровня f, по ε/2 массы с каждой стороны.
Минимум — концентрация: ε/2 массы переносится на наибольшую компоненту
с самых малых.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.optimize import bisect
from scipy.special import entr

from dist_core import entropy, validate_probabilities, variational_distance
from errors import DomainError

logger = logging.getLogger(__name__)

BISECTION_XTOL = 1e-12
BISECTION_MAXITER = 200
ORACLE_MAX_DIMENSION = 4
ORACLE_MAX_STEP = 0.002
# Допуск на принадлежность шару для точек сетки оракула
BALL_SLACK = 1e-9


class EntropyKind(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True, slots=True, eq=False)
class EntropyBallSolution:
    argopt: np.ndarray
    value: float
    kind: EntropyKind


def _prepare(q: "Sequence[float] | np.ndarray", epsilon: float) -> tuple[np.ndarray, float]:
    if math.isnan(epsilon) or epsilon < 0.0:
        raise DomainError("epsilon", epsilon, f"epsilon must be >= 0, got {epsilon!r}")
    center = validate_probabilities(q, name="q")
    if center.ndim != 1:
        center = center.ravel()
    # V не превосходит 2: шар большего радиуса совпадает со всем симплексом
    return center, min(float(epsilon), 2.0)


def _solution(argopt: np.ndarray, kind: EntropyKind) -> EntropyBallSolution:
    argopt = np.clip(argopt, 0.0, None)
    argopt = argopt / argopt.sum()
    argopt.setflags(write=False)
    return EntropyBallSolution(argopt=argopt, value=entropy(argopt), kind=kind)


def max_entropy_in_ball(q: "Sequence[float] | np.ndarray", epsilon: float) -> EntropyBallSolution:
    """Распределение с максимальной энтропией в шаре {p : V(p, q) ≤ ε}."""
    center, epsilon = _prepare(q, epsilon)
    if epsilon == 0.0:
        return _solution(center.copy(), EntropyKind.MAX)

    uniform = np.full(center.size, 1.0 / center.size)
    if variational_distance(center, uniform) <= epsilon:
        return _solution(uniform, EntropyKind.MAX)

    budget = epsilon / 2.0
    cap = bisect(
        lambda c: np.maximum(center - c, 0.0).sum() - budget,
        0.0,
        float(center.max()),
        xtol=BISECTION_XTOL,
        maxiter=BISECTION_MAXITER,
    )
    floor = bisect(
        lambda f: np.maximum(f - center, 0.0).sum() - budget,
        0.0,
        1.0,
        xtol=BISECTION_XTOL,
        maxiter=BISECTION_MAXITER,
    )
    logger.debug("max-entropy water levels: floor=%.12g cap=%.12g", floor, cap)
    if floor > cap:
        # Уровни сошлись: равномерное распределение на границе шара
        return _solution(uniform, EntropyKind.MAX)
    return _solution(np.clip(center, floor, cap), EntropyKind.MAX)


def min_entropy_in_ball(q: "Sequence[float] | np.ndarray", epsilon: float) -> EntropyBallSolution:
    """
    Распределение с минимальной энтропией в том же шаре.
    При равных массах выбирается компонента с меньшим индексом.
    """
    center, epsilon = _prepare(q, epsilon)
    top = int(np.argmax(center))
    transfer = min(epsilon / 2.0, 1.0 - float(center[top]))
    argopt = center.copy()
    if transfer <= 0.0:
        return _solution(argopt, EntropyKind.MIN)

    argopt[top] += transfer
    remaining = transfer
    for index in np.argsort(center, kind="stable"):
        if remaining <= 0.0:
            break
        if index == top:
            continue
        taken = min(float(argopt[index]), remaining)
        argopt[index] -= taken
        remaining -= taken
    return _solution(argopt, EntropyKind.MIN)


def _oracle_axis(center_value: float, half: float, step: float) -> np.ndarray:
    units = round(1.0 / step)
    low = max(0, math.ceil((center_value - half) / step - 1e-9))
    high = min(units, math.floor((center_value + half) / step + 1e-9))
    grid = np.arange(low, high + 1) * step
    # Центр и края шара добавляются явно, чтобы вырожденный шар не был пуст
    anchors = np.clip([center_value - half, center_value, center_value + half], 0.0, 1.0)
    return np.unique(np.concatenate([grid, anchors]))


def oracle_entropy_extremum(
    q: "Sequence[float] | np.ndarray",
    epsilon: float,
    kind: EntropyKind | str,
    step: float = 0.001,
) -> float:
    """
    Полный перебор по сетке симплекса с шагом step внутри ε-шара.
    Только для проверки замкнутых решений в тестах: размерность не больше 4.

    Каждая координата не может сместиться больше чем на ε/2, поэтому сетка
    строится в коробке [q_i − ε/2, q_i + ε/2]; последняя координата
    определяется условием нормировки.
    """
    kind = EntropyKind(kind)
    center, epsilon = _prepare(q, epsilon)
    if center.size > ORACLE_MAX_DIMENSION:
        raise DomainError(
            "q",
            center.size,
            f"oracle refuses dimension {center.size} > {ORACLE_MAX_DIMENSION} (grid too large)",
        )
    if not (0.0 < step <= ORACLE_MAX_STEP):
        raise DomainError(
            "step", step, f"oracle step must lie in (0, {ORACLE_MAX_STEP}], got {step!r}"
        )

    half = epsilon / 2.0
    axes = [_oracle_axis(float(value), half, step) for value in center[:-1]]
    if len(axes) > 1:
        mesh = np.stack([g.ravel() for g in np.meshgrid(*axes[1:], indexing="ij")], axis=1)
    else:
        mesh = np.empty((1, 0))

    best = math.inf if kind is EntropyKind.MIN else -math.inf
    for first in axes[0]:
        free = np.column_stack([np.full(mesh.shape[0], first), mesh])
        last = 1.0 - free.sum(axis=1)
        keep = last >= -1e-12
        if not np.any(keep):
            continue
        points = np.column_stack([free[keep], np.maximum(last[keep], 0.0)])
        inside = np.abs(points - center).sum(axis=1) <= epsilon + BALL_SLACK
        if not np.any(inside):
            continue
        values = entr(points[inside]).sum(axis=1)
        if kind is EntropyKind.MIN:
            best = min(best, float(values.min()))
        else:
            best = max(best, float(values.max()))
    return best
