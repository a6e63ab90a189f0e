import math
from typing import Any

from pydantic import BaseModel, ConfigDict, field_validator

from anti_orbits.errors import ModelInvariantError

HALF_PI = math.pi / 2


def check_sigma(sigma: float) -> None:
    if not 0 < sigma < HALF_PI:
        raise ModelInvariantError("sigma range", "sigma outside (0, π/2)")


def lambda0(bound: float, sigma: float) -> float:
    """Coupling above which every code with second differences <= ``bound`` is shadowed within ``sigma``."""
    check_sigma(sigma)
    if not bound > 0:
        raise ModelInvariantError("code bound", "code bound must be positive")
    return max((bound + 4 * sigma) / math.sin(sigma), 8 / math.cos(sigma))


def q_symbols(bound: float) -> int:
    """Number of admissible second differences ``b in pi*Z`` with ``|b| <= bound``."""
    if not bound > 0:
        raise ModelInvariantError("code bound", "code bound must be positive")
    return 1 + 2 * int(math.floor(bound / math.pi))


class StandardMapParams(BaseModel):
    """Coupling, uniqueness radius and code bound of a standard-map run."""

    model_config = ConfigDict(frozen=True)

    coupling: float
    sigma: float = math.pi / 4
    bound: float = math.pi

    @field_validator("coupling")
    @classmethod
    def _nonzero(cls, value: float) -> float:
        if value == 0 or not math.isfinite(value):
            raise ValueError("coupling must be a finite nonzero number")
        return value

    @field_validator("sigma")
    @classmethod
    def _sigma_range(cls, value: float) -> float:
        check_sigma(value)
        return value

    @field_validator("bound")
    @classmethod
    def _positive_bound(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("code bound must be positive")
        return value

    @property
    def lambda0(self) -> float:
        return lambda0(self.bound, self.sigma)

    @property
    def above_threshold(self) -> bool:
        return abs(self.coupling) >= self.lambda0

    @property
    def contraction_bound(self) -> float:
        return 4 / (abs(self.coupling) * math.cos(self.sigma))

    def as_meta(self) -> dict[str, Any]:
        return {
            "lambda": self.coupling,
            "sigma": self.sigma,
            "bound": self.bound,
            "lambda0": self.lambda0,
            "contraction_bound": self.contraction_bound,
        }
