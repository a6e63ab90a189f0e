import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from anti_orbits.config import ShadowConfig
from anti_orbits.dls.critical import phi_eval
from anti_orbits.dls.system import DLSystem
from anti_orbits.errors import ContractionFailure, GraphError, LeftBallError, NotConvergedError
from anti_orbits.symbolic.codes import Code, StandardCode, is_admissible

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Orbit:
    """A configuration sequence ``points[i]`` (shape ``(n, m)``) shadowing ``code``."""

    code: Code | StandardCode
    points: np.ndarray
    anchors: np.ndarray
    residual: float
    iterations: int
    contraction_estimate: float
    rho: float
    sigma: float
    update_ratios: tuple[float, ...] = ()
    rho_bound: float | None = None
    method: str = "contraction"
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def length(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def x(self) -> np.ndarray:
        """Scalar view for one-dimensional orbits."""
        return self.points[:, 0]

    @property
    def periodic(self) -> bool:
        return self.code.periodic

    def as_meta(self) -> dict[str, Any]:
        return {
            "rho": self.rho,
            "residual": self.residual,
            "iterations": self.iterations,
            "contraction_estimate": self.contraction_estimate,
            "sigma": self.sigma,
            "rho_bound": self.rho_bound,
            "method": self.method,
            "length": self.length,
            "periodic": self.periodic,
        }


def sup_distance(a: np.ndarray, b: np.ndarray) -> float:
    """sup over slots of the Euclidean distance."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(a - b, axis=1)))


def resolve_sigma(config: ShadowConfig, system: DLSystem, code: Code | None = None) -> float:
    edges = [system.edge(e) for e in dict.fromkeys(code.edges)] if code is not None else system.representative_edges()
    if not edges:
        raise GraphError("system has no edges")
    r_min = min(e.radius for e in edges)
    if config.sigma is None:
        return 0.5 * r_min
    if config.sigma >= r_min:
        raise ValueError(f"sigma={config.sigma:g} must be smaller than the edge radius {r_min:g}")
    return config.sigma


def neighbours(n: int, i: int, periodic: bool) -> tuple[int, int]:
    if periodic:
        return (i - 1) % n, (i + 1) % n
    return i - 1, i + 1


def coupling_gradient(code: Code, system: DLSystem, points: np.ndarray) -> np.ndarray:
    """d/dx_i (u_{k_{i-1}}(x_{i-1}, x_i) + u_{k_i}(x_i, x_{i+1})) at every free slot; zero elsewhere."""
    before, after = system.slot_pieces(code)
    n = len(code)
    out = np.zeros_like(points)
    for i in code.free_slots():
        lo, hi = neighbours(n, i, code.periodic)
        _, gy = before[i].coupling.grad(points[lo], points[i])
        gx, _ = after[i].coupling.grad(points[i], points[hi])
        out[i] = gy + gx
    return out


def el_gradient(code: Code, system: DLSystem, points: np.ndarray) -> np.ndarray:
    """Euler-Lagrange gradient d/dx_i (L_{k_{i-1}} + L_{k_i}) at the free slots."""
    before, after = system.slot_pieces(code)
    n = len(code)
    out = np.zeros_like(points)
    for i in code.free_slots():
        lo, hi = neighbours(n, i, code.periodic)
        _, gy = before[i].grad(points[lo], points[i])
        gx, _ = after[i].grad(points[i], points[hi])
        out[i] = gy + gx
    return out


def local_residuals(orbit: Orbit, system: DLSystem) -> np.ndarray:
    """Per-slot Euler-Lagrange norm; NaN at pinned window ends."""
    grad = el_gradient(orbit.code, system, orbit.points)
    norms = np.linalg.norm(grad, axis=1)
    if not orbit.periodic:
        norms[0] = math.nan
        norms[-1] = math.nan
    return norms


def code_residual(code: Code, system: DLSystem, points: np.ndarray) -> float:
    slots = list(code.free_slots())
    if not slots:
        return 0.0
    grad = el_gradient(code, system, points)
    return float(np.max(np.linalg.norm(grad[slots], axis=1)))


def residual(orbit: Orbit, system: DLSystem) -> float:
    return code_residual(orbit.code, system, orbit.points)


def _sup_norm(values: np.ndarray, slots: list[int]) -> float:
    if not slots:
        return 0.0
    return float(np.max(np.linalg.norm(values[slots], axis=1)))


def shadow(
    code: Code,
    system: DLSystem,
    config: ShadowConfig | None = None,
    *,
    initial: np.ndarray | None = None,
) -> Orbit:
    """Jacobi iteration of x_i <- phi_i(-d/dx_i (u_{k_{i-1}} + u_{k_i})) started at the code."""
    config = config or ShadowConfig.from_settings()
    if not is_admissible(code, system.graph):
        raise GraphError("code is not admissible")
    edges = [system.edge(e) for e in code.edges]
    anchors = system.anchors(code)
    sigma = resolve_sigma(config, system, code)
    free = list(code.free_slots())

    x = anchors.copy() if initial is None else np.array(initial, dtype=float).reshape(anchors.shape)
    if not code.periodic:
        x[0], x[-1] = anchors[0], anchors[-1]
    if sup_distance(x, anchors) >= sigma:
        raise LeftBallError()

    # sup |Du| over every visited configuration, anchors and final orbit included
    eps = _sup_norm(coupling_gradient(code, system, anchors), free)
    lip = max(e.lip_phi for e in edges)
    ratios: list[float] = []
    previous: float | None = None
    stalled = 0
    iterations = 0
    while True:
        iterations += 1
        if iterations > config.max_iterations:
            logger.warning("shadow.not_converged iterations=%d last_update=%.3e", config.max_iterations, previous or 0.0)
            raise NotConvergedError(f"no convergence after {config.max_iterations} sweeps")
        b = -coupling_gradient(code, system, x)
        eps = max(eps, _sup_norm(b, free))
        new = x.copy()
        for i in free:
            new[i] = phi_eval(edges[i], b[i], config.phi_tolerance)
        update = sup_distance(new, x)
        x = new
        if sup_distance(x, anchors) >= sigma:
            logger.info("shadow.left_ball iteration=%d sigma=%.3e", iterations, sigma)
            raise LeftBallError()
        if previous is not None and previous > config.ratio_floor:
            ratio = update / previous
            ratios.append(ratio)
            stalled = stalled + 1 if ratio >= 1.0 else 0
            if stalled >= config.stall_sweeps:
                logger.info("shadow.stalled iteration=%d ratio=%.3e", iterations, ratio)
                raise ContractionFailure("contraction failure: ε too large")
        if update < config.tolerance:
            break
        previous = update

    eps = max(eps, _sup_norm(coupling_gradient(code, system, x), free))
    res = code_residual(code, system, x)
    rho = sup_distance(x, anchors)
    contraction = max(ratios) if ratios else 0.0
    logger.info(
        "shadow.converged system=%s length=%d iterations=%d residual=%.3e rho=%.3e contraction=%.3e",
        system.name,
        len(code),
        iterations,
        res,
        rho,
        contraction,
    )
    return Orbit(
        code=code,
        points=x,
        anchors=anchors,
        residual=res,
        iterations=iterations,
        contraction_estimate=contraction,
        rho=rho,
        sigma=sigma,
        update_ratios=tuple(ratios),
        rho_bound=2.0 * lip * eps,
    )


def sweep_once(orbit: Orbit, system: DLSystem, config: ShadowConfig | None = None) -> np.ndarray:
    """One more application of the contraction operator to a finished orbit."""
    config = config or ShadowConfig.from_settings()
    code = orbit.code
    edges = [system.edge(e) for e in code.edges]
    b = -coupling_gradient(code, system, orbit.points)
    new = orbit.points.copy()
    for i in code.free_slots():
        new[i] = phi_eval(edges[i], b[i], config.phi_tolerance)
    return new


def action_window(orbit: Orbit, system: DLSystem, i0: int, i1: int) -> float:
    """Sum of L_{k_i}(x_i, x_{i+1}) for i0 <= i < i1 (cyclic for periodic codes)."""
    n = orbit.length
    upper = n - 1 if not orbit.periodic else None
    if i0 < 0 or i1 < i0 or (upper is not None and i1 > upper):
        raise IndexError("action window out of range")
    _, after = system.slot_pieces(orbit.code)
    total = 0.0
    for i in range(i0, i1):
        k = i % n
        total += after[k].value(orbit.points[k], orbit.points[(i + 1) % n])
    return total
