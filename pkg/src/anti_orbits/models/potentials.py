"""Named periodic potentials and wall profiles."""

import math
from collections.abc import Sequence
from dataclasses import replace
from typing import Any

import numpy as np
from scipy.interpolate import CubicSpline

from anti_orbits.dls.fields import Potential
from anti_orbits.errors import ModelInvariantError


def neg_cos(amplitude: float = 1.0, period: float = 2 * math.pi, dim: int = 1) -> Potential:
    """V(x) = -A sum_j cos(2 pi x_j / T)."""
    w = 2 * math.pi / period

    def value(x: np.ndarray) -> float:
        return float(-amplitude * np.sum(np.cos(w * x)))

    def grad(x: np.ndarray) -> np.ndarray:
        return amplitude * w * np.sin(w * x)

    def hess(x: np.ndarray) -> np.ndarray:
        return np.diag(amplitude * w * w * np.cos(w * x))

    return Potential(dim=dim, value=value, grad=grad, hess=hess, name="neg_cos")


def cos_wall(amplitude: float, period: float = 1.0) -> Potential:
    """f(x) = A cos(2 pi x / T)."""
    return replace(neg_cos(-amplitude, period), name="cos")


def two_well(depth: float = 0.5, amplitude: float = 1.0, period: float = 1.0) -> Potential:
    """V(x) = -A (cos(w x) + depth cos(2 w x)); two wells per period when depth > 1/4."""
    w = 2 * math.pi / period
    return Potential.scalar(
        lambda x: -amplitude * (math.cos(w * x) + depth * math.cos(2 * w * x)),
        lambda x: amplitude * w * (math.sin(w * x) + 2 * depth * math.sin(2 * w * x)),
        lambda x: amplitude * w * w * (math.cos(w * x) + 4 * depth * math.cos(2 * w * x)),
        name="two_well",
    )


def flat() -> Potential:
    return Potential.zero(1)


def spline_wall(values: Sequence[float], period: float = 1.0) -> Potential:
    """Periodic cubic spline through ``values`` sampled uniformly on one period."""
    samples = np.asarray(values, dtype=float)
    if samples.ndim != 1 or samples.size < 3:
        raise ModelInvariantError("wall profile", "spline walls need at least 3 samples")
    knots = np.linspace(0.0, period, samples.size + 1)
    spline = CubicSpline(knots, np.append(samples, samples[0]), bc_type="periodic")
    return Potential.scalar(
        lambda x: float(spline(x % period)),
        lambda x: float(spline(x % period, 1)),
        lambda x: float(spline(x % period, 2)),
        name="spline",
    )


def separable(parts: Sequence[Potential]) -> Potential:
    """V(x) = sum_j V_j(x_j) for one-dimensional parts."""
    dim = len(parts)

    def value(x: np.ndarray) -> float:
        return sum(p.value(x[j : j + 1]) for j, p in enumerate(parts))

    def grad(x: np.ndarray) -> np.ndarray:
        return np.concatenate([p.grad(x[j : j + 1]) for j, p in enumerate(parts)])

    def hess(x: np.ndarray) -> np.ndarray:
        return np.diag([float(p.hess(x[j : j + 1])[0, 0]) for j, p in enumerate(parts)])

    return Potential(dim=dim, value=value, grad=grad, hess=hess, name="+".join(p.name for p in parts))


def potential_from_json(data: dict[str, Any] | str) -> Potential:
    """Build a named potential: ``{"name": "neg_cos", "amplitude": 1.0, "period": 6.28, "dim": 1}``."""
    if isinstance(data, str):
        data = {"name": data}
    params = dict(data)
    name = str(params.pop("name", ""))
    builders = {
        "neg_cos": neg_cos,
        "cos": cos_wall,
        "two_well": two_well,
        "flat": flat,
        "spline": spline_wall,
    }
    if name not in builders:
        raise ModelInvariantError("potential", f"unknown potential {name!r}")
    try:
        return builders[name](**params)
    except TypeError as exc:
        raise ModelInvariantError("potential", f"bad parameters for {name!r}: {exc}") from exc
