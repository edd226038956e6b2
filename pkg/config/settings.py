from __future__ import annotations

from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application configuration loaded from environment variables / .env file."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    default_alpha: float = Field(default=0.05, gt=0.0, le=1.0, alias="MICONF_DEFAULT_ALPHA")
    default_unit: str = Field(default="bits", alias="MICONF_DEFAULT_UNIT")
    precision: int = Field(default=6, ge=1, le=17, alias="MICONF_PRECISION")

    # Monte Carlo
    default_seed: int = Field(default=20130101, ge=0, alias="MICONF_DEFAULT_SEED")
    default_reps: int = Field(default=100_000, ge=1, alias="MICONF_DEFAULT_REPS")
    workers: int = Field(default=4, ge=1, alias="MICONF_WORKERS")
    chunk_size: int = Field(default=2000, ge=1, alias="MICONF_CHUNK_SIZE")

    log_level: str = Field(default="WARNING", alias="MICONF_LOG_LEVEL")
    log_file_raw: str | None = Field(default=None, alias="MICONF_LOG_FILE", exclude=True)

    @property
    def log_file(self) -> Path | None:
        if self.log_file_raw is None:
            return None
        return Path(self.log_file_raw).expanduser().resolve()

    @field_validator("default_unit", mode="before")
    @classmethod
    def _normalize_unit(cls, value):
        if isinstance(value, str):
            value = value.strip().lower()
            if not value or value.startswith("#"):
                return "bits"
        if value not in ("bits", "nats"):
            raise ValueError("MICONF_DEFAULT_UNIT must be 'bits' or 'nats'")
        return value

    @field_validator("log_file_raw", mode="before")
    @classmethod
    def _empty_str_to_none(cls, value):
        """Пустая строка или комментарий в .env означают «не задано»."""
        if value is None:
            return None
        if isinstance(value, str):
            sanitized = value.strip()
            if not sanitized or sanitized.startswith("#"):
                return None
            return sanitized
        return value


settings = Settings()
