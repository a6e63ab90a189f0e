import math
from functools import lru_cache
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    shadow_tolerance: float = Field(default=1e-12, alias="SHADOW_TOLERANCE")
    shadow_max_iterations: int = Field(default=10000, alias="SHADOW_MAX_ITERATIONS")
    shadow_stall_sweeps: int = Field(default=10, alias="SHADOW_STALL_SWEEPS")
    phi_newton_tolerance: float = Field(default=1e-13, alias="PHI_NEWTON_TOLERANCE")
    fd_step: float = Field(default=1e-6, alias="FD_STEP")

    critical_point_tolerance: float = Field(default=1e-12, alias="CRITICAL_POINT_TOLERANCE")
    critical_point_max_steps: int = Field(default=100, alias="CRITICAL_POINT_MAX_STEPS")
    hessian_condition_limit: float = Field(default=1e12, alias="HESSIAN_CONDITION_LIMIT")
    radius_variation: float = Field(default=0.5, alias="RADIUS_VARIATION")
    radius_cap: float = Field(default=1.0, alias="RADIUS_CAP")
    lip_safety_factor: float = Field(default=2.0, alias="LIP_SAFETY_FACTOR")

    uniformity_grid_points: int = Field(default=5, alias="UNIFORMITY_GRID_POINTS")
    uniformity_random_points: int = Field(default=100, alias="UNIFORMITY_RANDOM_POINTS")

    cone_alpha_h: float = Field(default=0.5, alias="CONE_ALPHA_H")
    cone_alpha_v: float = Field(default=0.5, alias="CONE_ALPHA_V")
    cone_mu: float = Field(default=2.0, alias="CONE_MU")
    cone_samples: int = Field(default=1000, alias="CONE_SAMPLES")

    entropy_tolerance: float = Field(default=1e-10, alias="ENTROPY_TOLERANCE")
    entropy_max_iterations: int = Field(default=1_000_000, alias="ENTROPY_MAX_ITERATIONS")
    word_count_limit: int = Field(default=2**63 - 1, alias="WORD_COUNT_LIMIT")

    translation_radius: int = Field(default=3, alias="TRANSLATION_RADIUS")
    random_seed: int = Field(default=0, alias="RANDOM_SEED")
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")

    def model_post_init(self, __context: Any) -> None:  # type: ignore[override]
        self.log_level = self.log_level.strip().upper() or "INFO"
        self.translation_radius = max(self.translation_radius, 0)
        self.uniformity_grid_points = max(self.uniformity_grid_points, 2)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()


class ShadowConfig(BaseModel):
    """Knobs of the contraction iteration; ``sigma=None`` means half the smallest edge radius."""

    model_config = ConfigDict(frozen=True)

    sigma: float | None = None
    tolerance: float = 1e-12
    max_iterations: int = 10000
    phi_tolerance: float = 1e-13
    fd_step: float = 1e-6
    stall_sweeps: int = 10
    ratio_floor: float = 1e-10

    @field_validator("sigma")
    @classmethod
    def _positive_sigma(cls, value: float | None) -> float | None:
        if value is not None and not value > 0:
            raise ValueError("sigma must be positive")
        return value

    @field_validator("tolerance", "phi_tolerance", "fd_step", "ratio_floor")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("tolerances must be positive")
        return value

    @field_validator("max_iterations", "stall_sweeps")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("iteration limits must be >= 1")
        return value

    @classmethod
    def from_settings(cls, settings: Settings | None = None, **overrides: Any) -> "ShadowConfig":
        settings = settings or get_settings()
        values: dict[str, Any] = {
            "tolerance": settings.shadow_tolerance,
            "max_iterations": settings.shadow_max_iterations,
            "phi_tolerance": settings.phi_newton_tolerance,
            "fd_step": settings.fd_step,
            "stall_sweeps": settings.shadow_stall_sweeps,
        }
        values.update(overrides)
        return cls(**values)


class CriticalPointConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tolerance: float = 1e-12
    max_steps: int = 100
    condition_limit: float = 1e12
    radius_variation: float = 0.5
    radius_cap: float = 1.0
    lip_safety: float = 2.0

    @field_validator("tolerance", "condition_limit", "radius_variation", "radius_cap")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("critical point settings must be positive")
        return value

    @field_validator("lip_safety")
    @classmethod
    def _safety(cls, value: float) -> float:
        if value < 1:
            raise ValueError("lip_safety must be >= 1")
        return value

    @classmethod
    def from_settings(cls, settings: Settings | None = None, **overrides: Any) -> "CriticalPointConfig":
        settings = settings or get_settings()
        values: dict[str, Any] = {
            "tolerance": settings.critical_point_tolerance,
            "max_steps": settings.critical_point_max_steps,
            "condition_limit": settings.hessian_condition_limit,
            "radius_variation": settings.radius_variation,
            "radius_cap": settings.radius_cap,
            "lip_safety": settings.lip_safety_factor,
        }
        values.update(overrides)
        return cls(**values)


class ConeParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha_h: float = 0.5
    alpha_v: float = 0.5
    mu: float = 2.0
    samples: int = 1000

    @field_validator("alpha_h", "alpha_v")
    @classmethod
    def _alpha_range(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError("cone aperture must lie in (0, 1]")
        return value

    @field_validator("mu")
    @classmethod
    def _mu_range(cls, value: float) -> float:
        if not value > 1 or not math.isfinite(value):
            raise ValueError("mu must be a finite number > 1")
        return value

    @classmethod
    def from_settings(cls, settings: Settings | None = None, **overrides: Any) -> "ConeParams":
        settings = settings or get_settings()
        values: dict[str, Any] = {
            "alpha_h": settings.cone_alpha_h,
            "alpha_v": settings.cone_alpha_v,
            "mu": settings.cone_mu,
            "samples": settings.cone_samples,
        }
        values.update(overrides)
        return cls(**values)
