from __future__ import annotations

from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="STARX_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    fuel: int = Field(default=10000)
    max_nodes: int = Field(default=50000)
    strategy: str = Field(default="left-priority")

    insert_assoc: str = Field(default="left")
    cutc_rules: bool = Field(default=True)
    strict_activation: bool = Field(default=False)

    simulation_fuel: int = Field(default=200)
    simulation_max_nodes: int = Field(default=5000)
    simulation_admin_closure: bool = Field(default=False)

    label_width: int = Field(default=120)
    log_level: str = Field(default="WARNING")

    @field_validator("fuel", "max_nodes", "simulation_fuel", "simulation_max_nodes", "label_width")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("must be positive")
        return value

    @field_validator("insert_assoc")
    @classmethod
    def _association(cls, value: str) -> str:
        value = value.strip().lower()
        if value not in {"left", "right"}:
            raise ValueError("insert_assoc must be 'left' or 'right'")
        return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
