"""Run configuration of the batch front end and the code files it reads."""

import json
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from anti_orbits.dls.shadow import Orbit
from anti_orbits.errors import AntiOrbitsError, CodeFormatError, ModelInvariantError
from anti_orbits.models.billiard import billiard_code
from anti_orbits.models.lifting import code_from_points, unfold
from anti_orbits.models.registry import (
    BilliardModel,
    BuiltModel,
    ModelConfig,
    SepMapModel,
    StandardModel,
    parse_model,
)
from anti_orbits.models.sepmap import code_from_path, unfold_path
from anti_orbits.symbolic.codes import Code, StandardCode, widen_bound
from anti_orbits.symbolic.io import standard_code_from_json

Command = Literal["shadow", "verify", "entropy", "sweep"]

SWEEP_PARAMS = {"standard": "lambda", "kick": "lambda", "billiard": "width", "sepmap": "min_jump"}


class ConfigError(AntiOrbitsError):
    """Malformed or inconsistent run configuration."""


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    model: ModelConfig = Field(..., description="Model spec, or a built-in name.")
    code: str | None = Field(default=None, description="Path of the code JSON file.")
    out: str = Field(default="out", description="Output directory.")
    seed: int = Field(default=0, description="Seed of randomized checks.")
    grid: str | None = Field(default=None, description='Sweep grid "start:stop:step".')

    @field_validator("model", mode="before")
    @classmethod
    def _named_model(cls, value: Any) -> Any:
        if isinstance(value, str):
            return {"model": value}
        return value

    @field_validator("grid")
    @classmethod
    def _grid_format(cls, value: str | None) -> str | None:
        if value is not None:
            parse_grid(value)
        return value

    def grid_values(self) -> list[float]:
        if self.grid is None:
            raise ConfigError("sweep needs --grid start:stop:step")
        return parse_grid(self.grid)


def parse_grid(text: str) -> list[float]:
    """Inclusive grid ``start:stop:step``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:step, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise ValueError("grid needs step > 0 and stop >= start")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def load_json(path: str | Path) -> Any:
    """Parse a JSON file; syntax errors are reported with line and column."""
    source = Path(path)
    if not source.is_file():
        raise ConfigError(f"file not found: {source}")
    try:
        return json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {source} at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def describe_validation(exc: ValidationError) -> list[str]:
    out = []
    for error in exc.errors():
        where = ".".join(str(p) for p in error.get("loc", ()))
        message = str(error.get("msg", ""))
        out.append(f"{where}: {message}" if where else message)
    return out


def build_run_config(data: dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError("; ".join(describe_validation(exc))) from exc


def apply_override(data: dict[str, Any], name: str, value: float) -> dict[str, Any]:
    """Model JSON data with one parameter replaced.

    ``lambda`` is the coupling of the standard map, ``1 / mass`` of a kick map
    and the splitting exponent of the separatrix map.
    """
    kind = data.get("model")
    out = dict(data)
    if name == "lambda" and kind == "standard":
        out["coupling"] = value
    elif name == "lambda" and kind == "kick":
        if value == 0:
            raise ModelInvariantError("coupling", "coupling must be a finite nonzero number")
        out.update(mass=1.0 / value, matrix=None)
    elif name == "lambda" and kind == "sepmap":
        out["exponent"] = value
    elif name == "sigma" and kind == "standard":
        out["sigma"] = value
    elif name == "width" and kind == "billiard":
        out["width"] = value
    elif name == "min_jump" and kind == "sepmap":
        out["min_jump"] = int(round(value))
        if out.get("max_jump") is not None:
            out["max_jump"] = max(int(out["max_jump"]), out["min_jump"])
    else:
        raise ConfigError(f"parameter {name!r} does not apply to model {kind!r}")
    return out


def with_param(model: ModelConfig, name: str, value: float) -> ModelConfig:
    """Copy of ``model`` with one parameter replaced and re-validated."""
    return parse_model(apply_override(model.model_dump(), name, value))


def load_code(
    model: ModelConfig, built: BuiltModel | None, path: str | None
) -> tuple[Code | StandardCode, tuple[int, ...] | None]:
    """Read the code file of a model.

    * standard: ``{"multiples": [...], "periodic": true, "winding": 0}``; without
      ``"bound"`` the model bound is widened to cover the code
    * kick, billiard: ``{"points": [...], "periodic": true, "winding": 0}``
    * sepmap: ``{"sigmas": [...], "crits": [...], "jumps": [...], "periodic": false}``

    Lifted models also return the cell of the first point.
    """
    if path is None:
        raise ConfigError("this command needs --code")
    data = load_json(path)
    if not isinstance(data, dict):
        raise CodeFormatError("code file must hold a JSON object")
    if isinstance(model, StandardModel):
        if "bound" in data:
            return standard_code_from_json(data), None
        return widen_bound(standard_code_from_json(data, bound=model.bound)), None
    assert built is not None
    periodic = bool(data.get("periodic", True))
    if isinstance(model, SepMapModel):
        try:
            return code_from_path(built.system, data["sigmas"], data["crits"], data["jumps"], periodic), None
        except KeyError as exc:
            raise CodeFormatError(f"separatrix code needs {exc.args[0]!r}") from None
    points = data.get("points")
    if not isinstance(points, list) or not points:
        raise CodeFormatError("code needs a non-empty 'points' list")
    winding = data.get("winding", 0)
    if isinstance(model, BilliardModel):
        return billiard_code(built.system, points, periodic, winding=int(winding), first_wall=int(data.get("first_wall", 0)))
    return code_from_points(built.system, np.asarray(points, dtype=float).reshape(len(points), -1), periodic, winding=winding)


def absolute_points(
    model: ModelConfig, built: BuiltModel | None, orbit: Orbit, base: tuple[int, ...] | None = None
) -> np.ndarray:
    """Orbit positions in the covering space (lifted models are stored in the fundamental cell)."""
    if isinstance(model, StandardModel) or built is None:
        return orbit.points
    if isinstance(model, SepMapModel):
        return unfold_path(orbit.code, orbit.points).reshape(-1, 1)
    return unfold(built.system, orbit.code, orbit.points, base)


def load_run_config(path: str | Path, **overrides: Any) -> RunConfig:
    """RunConfig from a JSON file; keyword overrides replace top-level keys."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"run config must be a JSON object: {path}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return build_run_config(data)


def validate_config(path: str | Path) -> list[str]:
    """Schema and invariant diagnostics of a run config, without shadowing anything."""
    try:
        data = load_json(path)
    except ConfigError as exc:
        return [str(exc)]
    if not isinstance(data, dict):
        return ["run config must be a JSON object"]
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as exc:
        return describe_validation(exc)

    diagnostics: list[str] = []
    if config.code is not None and not Path(config.code).is_file():
        diagnostics.append(f"code file not found: {config.code}")
    if config.command == "sweep" and config.grid is None:
        diagnostics.append("sweep needs a grid")
    if config.command in ("shadow", "verify", "sweep") and config.code is None:
        diagnostics.append(f"{config.command} needs a code file")
    if diagnostics:
        return diagnostics

    try:
        built = None if isinstance(config.model, StandardModel) else config.model.build()
        if config.code is not None:
            load_code(config.model, built, config.code)
    except ModelInvariantError as exc:
        diagnostics.append(f"invariant {exc.invariant}: {exc}")
    except AntiOrbitsError as exc:
        diagnostics.append(str(exc))
    return diagnostics
