"""
Иерархия исключений miconf.
Код выхода CLI берётся из атрибута exit_code исключения.
"""

from __future__ import annotations

from typing import Any


class MiconfError(Exception):
    """Базовое исключение библиотеки."""

    exit_code = 1

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)


class InputError(MiconfError):
    """Некорректные входные данные: формат, размерности, метки вне алфавита."""

    exit_code = 2


class ProbabilityValidationError(InputError):
    """Вектор или матрица не является распределением вероятностей."""


class DomainError(MiconfError, ValueError):
    """Параметр вне области определения (alpha, gamma, epsilon, ...)."""

    exit_code = 3

    def __init__(self, parameter: str, value: Any, message: str):
        self.parameter = parameter
        self.value = value
        super().__init__(message)
