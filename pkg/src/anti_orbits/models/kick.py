"""Multidimensional kick maps ``x+ - 2x + x- = B^{-1} grad V(x)`` as lifted DLS."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from anti_orbits.config import CriticalPointConfig, get_settings
from anti_orbits.dls.fields import Coupling, Potential
from anti_orbits.dls.system import DLSystem, LagrangianPiece
from anti_orbits.errors import ModelInvariantError
from anti_orbits.models.lifting import LatticeLift, build_lifted_system, code_from_points, critical_points
from anti_orbits.models.potentials import neg_cos
from anti_orbits.symbolic.codes import Code, StandardCode

logger = logging.getLogger(__name__)

_WRAP_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class KickMapSpec:
    """L(x, y) = 1/2 <B (x - y), x - y> + V(y), with ``B = mass * I`` unless ``matrix`` is given."""

    potential: Potential
    period: Sequence[float]
    seeds: Sequence[Sequence[float] | float]
    mass: float = 1.0
    matrix: np.ndarray | None = None
    name: str = "kick"

    @property
    def dim(self) -> int:
        return self.potential.dim

    def coupling_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return np.atleast_2d(np.asarray(self.matrix, dtype=float))
        return self.mass * np.eye(self.dim)


def _check_matrix(b: np.ndarray, dim: int) -> None:
    if b.shape != (dim, dim):
        raise ModelInvariantError("coupling matrix", f"B must be {dim}x{dim}")
    if not np.allclose(b, b.T):
        raise ModelInvariantError("coupling matrix", "B must be symmetric")
    if np.any(b) and abs(np.linalg.det(b)) <= 1e-12 * np.linalg.norm(b, 2) ** dim:
        raise ModelInvariantError("coupling matrix", "B must be nondegenerate")


def _wrap(points: np.ndarray, period: np.ndarray) -> np.ndarray:
    wrapped = points - period * np.floor(points / period + _WRAP_SLACK)
    order = np.lexsort(wrapped.T[::-1])
    return wrapped[order]


def make_kick_map(
    spec: KickMapSpec,
    *,
    radius: int | None = None,
    config: CriticalPointConfig | None = None,
) -> DLSystem:
    """One sheet of critical points of V lifted by the period lattice up to ``radius`` cells."""
    config = config or CriticalPointConfig.from_settings()
    radius = get_settings().translation_radius if radius is None else radius
    if spec.mass < 0 and spec.matrix is None:
        raise ModelInvariantError("coupling matrix", "mass parameter must be >= 0")
    b = spec.coupling_matrix()
    _check_matrix(b, spec.dim)
    period = np.broadcast_to(np.asarray(spec.period, dtype=float), (spec.dim,)).copy()
    if np.any(period <= 0):
        raise ModelInvariantError("lattice", "periods must be positive")

    seeds = [np.broadcast_to(np.atleast_1d(np.asarray(s, dtype=float)), (spec.dim,)) for s in spec.seeds]
    crits = _wrap(critical_points(spec.potential, seeds, config, period), period)
    lift = LatticeLift(sheets=(crits,), period=period, radius=radius)
    zero = Potential.zero(spec.dim)
    cap = config.radius_cap

    def piece(s: int, i: int, j: int, n: tuple[int, ...]) -> LagrangianPiece:
        return LagrangianPiece(
            index=(s, i, j, n),
            v_minus=zero,
            v_plus=spec.potential,
            coupling=Coupling.quadratic(b, offset=np.asarray(n) * period),
            domain_minus=lift.domain(0, i, cap),
            domain_plus=lift.domain(0, j, cap),
        )

    logger.info("kick.build name=%s dim=%d crits=%d radius=%d", spec.name, spec.dim, len(crits), radius)
    return build_lifted_system(lift, piece, config, spec.name)


def standard_map_spec(coupling: float) -> KickMapSpec:
    """The standard map at coupling ``coupling`` as a kick map with V = -cos and B = 1/coupling."""
    if coupling == 0 or not math.isfinite(coupling):
        raise ModelInvariantError("coupling", "coupling must be a finite nonzero number")
    return KickMapSpec(
        potential=neg_cos(),
        period=(2 * math.pi,),
        seeds=(0.1, math.pi - 0.1),
        matrix=np.array([[1.0 / coupling]]),
        name="standard-kick",
    )


def standard_map_system(coupling: float, *, radius: int = 1, config: CriticalPointConfig | None = None) -> DLSystem:
    return make_kick_map(standard_map_spec(coupling), radius=radius, config=config)


def kick_code(system: DLSystem, code: StandardCode) -> tuple[Code, tuple[int, ...]]:
    """Lifted code visiting the same multiples of pi as a standard-map code."""
    return code_from_points(system, code.entries.reshape(-1, 1), code.periodic, winding=code.winding)


def kick_residual(spec: KickMapSpec, absolute: np.ndarray) -> float:
    """sup |B (x+ - 2x + x-) - grad V(x)| over the interior of an unfolded orbit."""
    b = spec.coupling_matrix()
    x = np.asarray(absolute, dtype=float).reshape(-1, spec.dim)
    worst = 0.0
    for i in range(1, len(x) - 1):
        lhs = b @ (x[i + 1] - 2 * x[i] + x[i - 1])
        worst = max(worst, float(np.linalg.norm(lhs - spec.potential.grad(x[i]))))
    return worst
