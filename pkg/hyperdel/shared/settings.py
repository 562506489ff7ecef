"""
Runtime configuration, read from HYPERDEL_* environment variables (and .env).
"""
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings for caches, budgets and parallelism."""

    model_config = SettingsConfigDict(env_prefix="HYPERDEL_", extra="ignore")

    cache_dir: Optional[Path] = None
    cache_max_entries: int = Field(default=4096, ge=1)
    pair_budget: int = Field(default=2**20, ge=1)
    vertex_budget: int = Field(default=2**16, ge=1)
    mis_timeout: float = Field(default=60.0, gt=0)
    threads: int = Field(default=1, ge=1)
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the process-wide settings (read once)."""
    return Settings()
