import logging

import numpy as np

from anti_orbits.config import CriticalPointConfig
from anti_orbits.dls.fields import Box, Potential
from anti_orbits.dls.system import EdgeData, LagrangianPiece, edge_potential
from anti_orbits.errors import CriticalPointError, DegenerateCriticalPoint, NotConvergedError, PhiDomainError

logger = logging.getLogger(__name__)

_PROBE_FRACTIONS = (0.25, 0.5, 0.75, 1.0)
_BISECTION_STEPS = 20
PHI_MAX_STEPS = 50


def scaled_condition(hessian: np.ndarray) -> float:
    """max(|H|, 1) / smallest singular value; infinite for singular H."""
    singular = np.linalg.svd(np.atleast_2d(hessian), compute_uv=False)
    if singular[-1] == 0.0:
        return float("inf")
    return float(max(singular[0], 1.0) / singular[-1])


def find_critical_point(
    pair: tuple[LagrangianPiece, LagrangianPiece] | Potential,
    seed: np.ndarray | float,
    *,
    domain: Box | None = None,
    config: CriticalPointConfig | None = None,
) -> EdgeData:
    """Newton iteration on grad Psi = 0 started at ``seed``.

    ``pair`` is either the (source, target) pieces of an edge, in which case
    Psi = V^+_source + V^-_target, or Psi itself.
    """
    config = config or CriticalPointConfig.from_settings()
    if isinstance(pair, Potential):
        psi, source, target = pair, None, None
    else:
        psi, source, target = edge_potential(*pair), pair[0].index, pair[1].index

    x = np.atleast_1d(np.asarray(seed, dtype=float)).copy()
    converged = False
    for step in range(1, config.max_steps + 1):
        g = psi.grad(x)
        h = psi.hess(x)
        try:
            delta = np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            if np.linalg.norm(g) <= config.tolerance:
                raise DegenerateCriticalPoint() from None
            raise CriticalPointError("no critical point from seed") from None
        x = x - delta
        if not np.all(np.isfinite(x)) or (domain is not None and not domain.contains(x)):
            logger.info("critical.rejected reason=left_domain step=%d", step)
            raise CriticalPointError("no critical point from seed")
        scale = max(1.0, float(np.linalg.norm(h, 2)))
        if np.linalg.norm(delta) <= config.tolerance * (1.0 + np.linalg.norm(x)) and np.linalg.norm(psi.grad(x)) <= config.tolerance * scale:
            converged = True
            break
    if not converged:
        logger.info("critical.rejected reason=diverged steps=%d", config.max_steps)
        raise CriticalPointError("no critical point from seed")

    hessian = np.atleast_2d(psi.hess(x))
    condition = scaled_condition(hessian)
    if condition > config.condition_limit:
        logger.info("critical.rejected reason=degenerate cond=%.3e", condition)
        raise DegenerateCriticalPoint()

    radius = _uniformity_radius(psi, x, hessian, config, domain)
    lip = config.lip_safety * float(np.linalg.norm(np.linalg.inv(hessian), 2))
    logger.debug("critical.found point=%s radius=%.3e lip=%.3e cond=%.3e", x.tolist(), radius, lip, condition)
    return EdgeData(
        edge=None,
        source=source,
        target=target,
        point=x,
        hessian=hessian,
        radius=radius,
        lip_phi=lip,
        psi=psi,
        condition=condition,
    )


def _sample_directions(dim: int) -> list[np.ndarray]:
    dirs = []
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        dirs.extend([e, -e])
    if dim > 1:
        diag = np.ones(dim) / np.sqrt(dim)
        dirs.extend([diag, -diag])
    return dirs


def _uniformity_radius(
    psi: Potential,
    center: np.ndarray,
    hessian: np.ndarray,
    config: CriticalPointConfig,
    domain: Box | None,
) -> float:
    """Largest radius (up to the cap and the domain) keeping D^2 Psi within the allowed relative variation."""
    cap = config.radius_cap
    if domain is not None:
        lower = domain.center - domain.half_width
        upper = domain.center + domain.half_width
        cap = min(cap, float(np.min(np.minimum(center - lower, upper - center))))
    if cap <= 0:
        raise CriticalPointError("critical point on the domain boundary")
    allowed = config.radius_variation * float(np.linalg.norm(hessian, 2))
    directions = _sample_directions(center.size)

    def ok(rho: float) -> bool:
        for d in directions:
            for t in _PROBE_FRACTIONS:
                if np.linalg.norm(psi.hess(center + t * rho * d) - hessian, 2) > allowed:
                    return False
        return True

    if ok(cap):
        return cap
    good, bad = cap, cap
    for _ in range(60):
        good *= 0.5
        if ok(good):
            break
        bad = good
    else:
        raise CriticalPointError("no uniformity radius")
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (good + bad)
        if ok(mid):
            good = mid
        else:
            bad = mid
    return good


def phi_eval(edge: EdgeData, b: np.ndarray | float, tolerance: float = 1e-13) -> np.ndarray:
    """Solve D Psi(x) = b near the critical point by Newton seeded at it."""
    target = np.atleast_1d(np.asarray(b, dtype=float))
    if not np.any(target):
        return edge.point.copy()
    x = edge.point.copy()
    for _ in range(PHI_MAX_STEPS):
        try:
            delta = np.linalg.solve(edge.psi.hess(x), edge.psi.grad(x) - target)
        except np.linalg.LinAlgError as exc:
            raise PhiDomainError() from exc
        x = x - delta
        if not np.all(np.isfinite(x)) or np.linalg.norm(x - edge.point) > edge.radius:
            raise PhiDomainError()
        if np.linalg.norm(delta) <= tolerance * (1.0 + np.linalg.norm(x)):
            return x
    raise NotConvergedError("phi evaluation did not converge")
