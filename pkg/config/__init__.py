from __future__ import annotations

from .settings import Settings, settings

DEFAULT_ALPHA = settings.default_alpha
DEFAULT_UNIT = settings.default_unit
PRECISION = settings.precision

DEFAULT_SEED = settings.default_seed
DEFAULT_REPS = settings.default_reps
WORKERS = settings.workers
CHUNK_SIZE = settings.chunk_size

LOG_LEVEL = settings.log_level
LOG_FILE = settings.log_file

TOOL_VERSION = "1.0.0"

# Версия схемы JSON-отчётов CLI; внешние скрипты фиксируются на неё
REPORT_SCHEMA = "miconf/1"

__all__ = [
    "Settings",
    "settings",
    "DEFAULT_ALPHA",
    "DEFAULT_UNIT",
    "PRECISION",
    "DEFAULT_SEED",
    "DEFAULT_REPS",
    "WORKERS",
    "CHUNK_SIZE",
    "LOG_LEVEL",
    "LOG_FILE",
    "REPORT_SCHEMA",
    "TOOL_VERSION",
]
