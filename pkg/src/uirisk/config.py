"""
Application configuration using Pydantic Settings.

All tolerances, horizons and runtime knobs are loaded from environment
variables or a .env file. Nothing numeric is hardcoded in the algorithms.
"""

from pathlib import Path
from typing import Annotated

from pydantic import field_validator
from pydantic_settings import BaseSettings, NoDecode, SettingsConfigDict


class NumericsSettings(BaseSettings):
    """Tolerances shared by the distribution and distortion layers."""

    atom_tol: float = 1e-12
    weight_tol: float = 1e-12
    zero_tol: float = 1e-12
    concavity_grid: int = 2048
    concavity_tol: float = 1e-10

    model_config = SettingsConfigDict(env_prefix="UIRISK_NUMERICS_")


class UISettings(BaseSettings):
    """Uniform-integrability diagnostic thresholds."""

    grid_levels: int = 20
    horizon: int = 10_000
    decay_factor: float = 1e-3
    divergence_threshold: float = 1e6
    not_ui_floor: float = 0.5
    growth_ratio: float = 0.9
    settle_tol: float = 1e-3
    n_terms: int = 20
    max_dyadic_level: int = 200

    model_config = SettingsConfigDict(env_prefix="UIRISK_UI_")


class SearchSettings(BaseSettings):
    """Empirical folding-score search."""

    atoms: int = 4
    max_atoms: int = 8
    iterations: int = 100_000
    batch_size: int = 4096

    model_config = SettingsConfigDict(env_prefix="UIRISK_SEARCH_")


class ConvergenceSettings(BaseSettings):
    """Convergence experiment defaults."""

    replications: int = 200
    exceedance_levels: Annotated[list[float], NoDecode] = [0.1, 0.05]
    grid_size: int = 1000

    model_config = SettingsConfigDict(env_prefix="UIRISK_CONV_")

    @field_validator("exceedance_levels", mode="before")
    @classmethod
    def parse_levels(cls, v: str | list[float]) -> list[float]:
        if isinstance(v, str):
            return [float(p) for p in v.split(",") if p.strip()]
        return v


class InvestSettings(BaseSettings):
    """Risk-constrained investment solver."""

    grid_size: int = 50
    starts: int = 8
    fd_step: float = 1e-5
    max_iter: int = 200
    feasibility_tol: float = 1e-9
    gap_floor: float = 1e-6

    model_config = SettingsConfigDict(env_prefix="UIRISK_INVEST_")


class RuntimeSettings(BaseSettings):
    """Worker count and master seed."""

    threads: int = 1
    seed: int = 7

    model_config = SettingsConfigDict(env_prefix="UIRISK_")

    @field_validator("threads")
    @classmethod
    def at_least_one(cls, v: int) -> int:
        return max(1, v)


class PathSettings(BaseSettings):
    """Where reports land; relative --output paths resolve under output_dir."""

    output_dir: str = "reports"

    model_config = SettingsConfigDict(env_prefix="UIRISK_")

    def ensure_dirs(self) -> Path:
        root = Path(self.output_dir)
        root.mkdir(parents=True, exist_ok=True)
        return root


class LoggingSettings(BaseSettings):
    """Logging configuration."""

    level: str = "INFO"
    file: str = "logs/uirisk.log"

    model_config = SettingsConfigDict(env_prefix="UIRISK_LOG_")


class Settings(BaseSettings):
    """Main settings, aggregating all sub-settings."""

    numerics: NumericsSettings = NumericsSettings()
    ui: UISettings = UISettings()
    search: SearchSettings = SearchSettings()
    convergence: ConvergenceSettings = ConvergenceSettings()
    invest: InvestSettings = InvestSettings()
    runtime: RuntimeSettings = RuntimeSettings()
    paths: PathSettings = PathSettings()
    logging: LoggingSettings = LoggingSettings()

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    def setup(self, reports: bool = True) -> None:
        """Create the log directory, and the report root when the run writes a report."""
        Path(self.logging.file).parent.mkdir(parents=True, exist_ok=True)
        if reports:
            self.paths.ensure_dirs()


# Global settings instance, import this in other modules
settings = Settings()
