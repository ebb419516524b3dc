from functools import lru_cache

from pydantic import PositiveFloat, PositiveInt
from pydantic_settings import BaseSettings, SettingsConfigDict

from herbrand.core.options import Availability, HullMode, OutputFormat, Strategy


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file="services/herbrand/.env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        env_prefix="herbrand_",
    )

    output_format: OutputFormat = OutputFormat.TEXT
    log_level: str = "INFO"
    progress: bool = True

    # search
    strategy: Strategy = Strategy.PROPAGATE
    availability: Availability = Availability.ATOMIC
    max_nodes: PositiveInt = 200_000  # per search query
    max_seconds: PositiveFloat = 60.0
    jobs: PositiveInt = 1
    brute_max_terms: PositiveInt = 7
    core_attempts: PositiveInt = 64

    # hulls and refutation
    hull_mode: HullMode = HullMode.THEORY
    max_level: int = 3
    max_terms: PositiveInt = 400

    # coding
    omega_bit_budget: PositiveInt = 1 << 24


@lru_cache()
def herbrand_settings() -> Settings:
    return Settings()
