import logging

import numpy as np
from scipy.optimize import root

from anti_orbits.config import ShadowConfig
from anti_orbits.dls.shadow import Orbit, neighbours, code_residual, el_gradient, resolve_sigma, sup_distance
from anti_orbits.dls.system import DLSystem
from anti_orbits.errors import GraphError, NotConvergedError
from anti_orbits.symbolic.codes import Code, is_admissible

logger = logging.getLogger(__name__)

POLISH_STEPS = 3


def el_jacobian(code: Code, system: DLSystem, points: np.ndarray) -> np.ndarray:
    """Dense Jacobian of the stacked Euler-Lagrange gradient over the free slots."""
    before, after = system.slot_pieces(code)
    n, m = points.shape
    free = list(code.free_slots())
    column = {slot: k for k, slot in enumerate(free)}
    jac = np.zeros((len(free) * m, len(free) * m))
    for k, i in enumerate(free):
        lo, hi = neighbours(n, i, code.periodic)
        _, hxy_b, hyy_b = before[i].hess(points[lo], points[i])
        hxx_a, hxy_a, _ = after[i].hess(points[i], points[hi])
        rows = slice(k * m, (k + 1) * m)
        jac[rows, k * m:(k + 1) * m] += hyy_b + hxx_a
        # parallel contributions add up for periods 1 and 2
        if lo in column:
            c = column[lo]
            jac[rows, c * m:(c + 1) * m] += hxy_b.T
        if hi in column:
            c = column[hi]
            jac[rows, c * m:(c + 1) * m] += hxy_a
    return jac


def newton_oracle(
    code: Code,
    system: DLSystem,
    config: ShadowConfig | None = None,
    *,
    tolerance: float = 1e-12,
    accept: float = 1e-11,
) -> Orbit:
    """Solve the stacked Euler-Lagrange equations with scipy's hybrid Newton, seeded at the code."""
    config = config or ShadowConfig.from_settings()
    if not is_admissible(code, system.graph):
        raise GraphError("code is not admissible")
    anchors = system.anchors(code)
    free = list(code.free_slots())
    m = anchors.shape[1]
    if not free:
        return Orbit(code, anchors.copy(), anchors, 0.0, 0, 0.0, 0.0, resolve_sigma(config, system, code), method="newton")

    def assemble(z: np.ndarray) -> np.ndarray:
        points = anchors.copy()
        points[free] = z.reshape(len(free), m)
        return points

    def fun(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        points = assemble(z)
        grad = el_gradient(code, system, points)[free].ravel()
        return grad, el_jacobian(code, system, points)

    sol = root(fun, anchors[free].ravel(), jac=True, method="hybr", tol=tolerance)
    z = sol.x
    for _ in range(POLISH_STEPS):
        grad, jac = fun(z)
        if np.max(np.abs(grad)) <= accept:
            break
        z = z - np.linalg.solve(jac, grad)
    points = assemble(z)
    res = code_residual(code, system, points)
    if not sol.success and res > accept:
        logger.warning("oracle.failed status=%s message=%s residual=%.3e", sol.status, sol.message, res)
        raise NotConvergedError(f"newton oracle failed: {sol.message}")
    logger.info("oracle.converged system=%s length=%d nfev=%d residual=%.3e", system.name, len(code), sol.nfev, res)
    return Orbit(
        code=code,
        points=points,
        anchors=anchors,
        residual=res,
        iterations=int(sol.nfev),
        contraction_estimate=0.0,
        rho=sup_distance(points, anchors),
        sigma=resolve_sigma(config, system, code),
        method="newton",
    )
