import logging

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False
    )

    # Server Configuration
    server_host: str = "0.0.0.0"
    server_port: int = 8000
    api_prefix: str = "/api"

    # Application
    app_name: str = "SSG Solver Service"
    app_version: str = "0.1.0"
    debug: bool = False
    log_level: str = "INFO"

    # Parsing
    probability_tolerance: float = 1e-12  # allowed |sum - 1| in float mode
    min_probability: float = 1e-15  # smaller transitions are rejected

    # Bounded value iteration
    bvi_epsilon: float = 1e-6
    bvi_deflate_period: int = 100
    bvi_max_iterations: int = 10_000_000

    # Strategy iteration
    si_inner_epsilon: float = 1e-8
    si_max_rounds: int = 10_000

    # Mathematical programs
    mec_pair_budget: int = 1_000_000
    local_solve_restarts: int = 5
    local_solve_max_steps: int = 2000
    local_solve_tolerance: float = 1e-6
    local_solve_seed: int = 0

    # Oracle
    oracle_profile_budget: int = 10_000_000

    # Benchmarking
    bench_timeout: float = 900.0  # seconds per solve
    bench_workers: int = 1

    @property
    def log_level_value(self) -> int:
        """Numeric logging level; debug mode forces DEBUG."""
        if self.debug:
            return logging.DEBUG
        level = logging.getLevelName(self.log_level.upper())
        return level if isinstance(level, int) else logging.INFO


# Global settings instance
settings = Settings()
