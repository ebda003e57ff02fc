"""Engine settings loaded from the environment.

Every CLI option that has a sensible default reads it from here, so the defaults of a
whole session (seed, suite sizes, depth, logging) can be set once with environment
variables prefixed ``STONEKERNELS_``.

Example:
    $ STONEKERNELS_SEED=7 STONEKERNELS_DEPTH=5 stonekernels axioms
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class EngineSettings(BaseSettings):
    """Defaults for generators, law suites, sampling and logging.

    Attributes:
        seed: Seed of every generator when no ``--seed`` is given
        cases: Number of random cases per law suite
        max_size: Largest finite object drawn by the generators
        depth: Depth used for pro-level checks and evaluation
        max_denominator: Largest row denominator drawn by the random kernel generator
        sample_count: Number of draws made by ``sample`` when no ``--count`` is given
        log_level: Minimum level of structured log output
        log_format: Structured log renderer
        max_program_bytes: Largest program file accepted by the loader
    """

    model_config = SettingsConfigDict(env_prefix="STONEKERNELS_", extra="ignore")

    seed: int = 0
    cases: int = Field(default=200, ge=1)
    max_size: int = Field(default=3, ge=1, le=5)
    depth: int = Field(default=3, ge=0)
    max_denominator: int = Field(default=16, ge=1)
    sample_count: int = Field(default=1000, ge=1)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "ERROR"
    log_format: Literal["json", "console"] = "console"
    max_program_bytes: int = 10 * 1024 * 1024


@lru_cache(maxsize=1)
def get_settings() -> EngineSettings:
    """Return the process-wide settings, read once from the environment."""
    return EngineSettings()
