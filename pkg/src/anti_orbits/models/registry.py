"""JSON model specifications and the builders behind them."""

import math
from dataclasses import dataclass
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator

from anti_orbits.dls.system import DLSystem
from anti_orbits.models.billiard import StripBilliardSpec, make_strip_billiard
from anti_orbits.models.kick import KickMapSpec, make_kick_map
from anti_orbits.models.potentials import potential_from_json, separable
from anti_orbits.models.sepmap import SepMapSpec, make_sepmap
from anti_orbits.standard_map.params import StandardMapParams, check_sigma

PotentialJson = dict[str, Any] | str


@dataclass(frozen=True, eq=False)
class BuiltModel:
    system: DLSystem
    spec: Any


class StandardModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    model: Literal["standard"] = "standard"
    coupling: float = Field(..., description="Coupling lambda of the standard map.")
    sigma: float = Field(default=math.pi / 4, description="Uniqueness radius in (0, pi/2).")
    bound: float = Field(default=math.pi, description="Bound on the code second differences.")

    @field_validator("sigma")
    @classmethod
    def _sigma_range(cls, value: float) -> float:
        check_sigma(value)
        return value

    def params(self) -> StandardMapParams:
        return StandardMapParams(coupling=self.coupling, sigma=self.sigma, bound=self.bound)


class KickModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    model: Literal["kick"] = "kick"
    potential: PotentialJson | list[PotentialJson] = Field(
        default="neg_cos",
        description="Named potential, or one per axis for a separable potential.",
    )
    period: list[float] = Field(default_factory=lambda: [2 * math.pi])
    seeds: list[list[float] | float] = Field(default_factory=lambda: [0.1, math.pi - 0.1])
    mass: float = Field(default=1.0, ge=0.0, description="epsilon^2; B = mass * I.")
    matrix: list[list[float]] | None = Field(default=None, description="Explicit symmetric B.")
    radius: int | None = Field(default=None, ge=0, description="Translation radius of the lift.")

    def build(self) -> BuiltModel:
        if isinstance(self.potential, list):
            potential = separable([potential_from_json(p) for p in self.potential])
        else:
            potential = potential_from_json(self.potential)
        spec = KickMapSpec(
            potential=potential,
            period=tuple(self.period),
            seeds=tuple(self.seeds),
            mass=self.mass,
            matrix=None if self.matrix is None else np.asarray(self.matrix, dtype=float),
        )
        return BuiltModel(make_kick_map(spec, radius=self.radius), spec)


class BilliardModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    model: Literal["billiard"] = "billiard"
    lower: PotentialJson = Field(default_factory=lambda: {"name": "cos", "amplitude": 0.1})
    upper: PotentialJson = Field(default_factory=lambda: {"name": "cos", "amplitude": 0.07})
    width: float = Field(default=50.0, gt=0.0)
    lower_seeds: list[float] = Field(default_factory=lambda: [0.01, 0.49])
    upper_seeds: list[float] = Field(default_factory=lambda: [0.01, 0.49])
    period: float = Field(default=1.0, gt=0.0)
    radius: int | None = Field(default=None, ge=0)

    def build(self) -> BuiltModel:
        spec = StripBilliardSpec(
            lower=potential_from_json(self.lower),
            upper=potential_from_json(self.upper),
            width=self.width,
            lower_seeds=tuple(self.lower_seeds),
            upper_seeds=tuple(self.upper_seeds),
            period=self.period,
        )
        return BuiltModel(make_strip_billiard(spec, radius=self.radius), spec)


class SepMapModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    model: Literal["sepmap"] = "sepmap"
    exponent: float = Field(default=1.0, gt=0.0, description="Splitting exponent lambda_s.")
    potentials: list[PotentialJson] = Field(
        default_factory=lambda: [{"name": "neg_cos", "period": 1.0}, {"name": "neg_cos", "period": 1.0}],
        min_length=2,
        max_length=2,
    )
    seeds: list[list[float]] = Field(default_factory=lambda: [[0.01, 0.49], [0.01, 0.49]], min_length=2, max_length=2)
    min_jump: int = Field(default=10, ge=1)
    max_jump: int | None = None
    omega_hat: tuple[float, float] = (0.0, 0.0)
    exponential: bool = True

    def build(self) -> BuiltModel:
        spec = SepMapSpec(
            exponent=self.exponent,
            potentials=(potential_from_json(self.potentials[0]), potential_from_json(self.potentials[1])),
            seeds=(tuple(self.seeds[0]), tuple(self.seeds[1])),
            min_jump=self.min_jump,
            max_jump=self.max_jump,
            omega_hat=self.omega_hat,
            exponential=self.exponential,
        )
        return BuiltModel(make_sepmap(spec), spec)


ModelConfig = Annotated[StandardModel | KickModel | BilliardModel | SepMapModel, Field(discriminator="model")]

_ADAPTER: TypeAdapter[ModelConfig] = TypeAdapter(ModelConfig)

BUILTIN_MODELS = ("standard", "kick", "billiard", "sepmap")


def parse_model(data: dict[str, Any] | str) -> StandardModel | KickModel | BilliardModel | SepMapModel:
    """Model config from JSON data; a bare name selects the built-in defaults."""
    if isinstance(data, str):
        data = {"model": data}
    return _ADAPTER.validate_python(data)
