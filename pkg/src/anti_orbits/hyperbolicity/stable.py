import logging

import numpy as np

from anti_orbits.dls.shadow import Orbit
from anti_orbits.errors import NoStableDirection
from anti_orbits.hyperbolicity.blocks import VariationalBlocks

logger = logging.getLogger(__name__)

DECAY_SLACK = 1e-6
SWEEP_TOLERANCE = 1e-15
MAX_SWEEPS = 10000
STALL_SWEEPS = 10


def _bounded_solution(
    blocks: VariationalBlocks,
    slots: list[int],
    u0: np.ndarray,
    forward: bool,
    mu: float,
) -> np.ndarray:
    """Solve u_j = P u_{j-1} + Q u_j + R u_{j+1} along ``slots`` by contraction, zero beyond the horizon."""
    m = blocks.dim
    rows = [blocks.position(s) for s in slots]
    horizon = len(slots)
    u = np.zeros((horizon + 2, m))
    u[0] = u0
    scale = max(1.0, float(np.linalg.norm(u0)))
    if not np.any(u0):
        return u[:-1]
    previous: float | None = None
    stalled = 0
    for _ in range(MAX_SWEEPS):
        new = u.copy()
        for j, k in enumerate(rows, start=1):
            # walking backwards in time swaps the roles of P and R
            before, after = (blocks.p[k], blocks.r[k]) if forward else (blocks.r[k], blocks.p[k])
            new[j] = before @ u[j - 1] + blocks.q[k] @ u[j] + after @ u[j + 1]
        update = float(np.max(np.abs(new - u)))
        u = new
        if update <= SWEEP_TOLERANCE * scale:
            break
        if previous is not None and previous > 0:
            stalled = stalled + 1 if update >= previous else 0
            if stalled >= STALL_SWEEPS:
                raise NoStableDirection()
        previous = update
    else:
        raise NoStableDirection()

    u = u[:-1]
    norm0 = float(np.linalg.norm(u0))
    for j in range(1, horizon + 1):
        if np.linalg.norm(u[j]) > mu ** (-j) * norm0 * (1 + DECAY_SLACK):
            logger.info("stable.decay_violated step=%d norm=%.3e", j, float(np.linalg.norm(u[j])))
            raise NoStableDirection()
    return u


def stable_vector(
    orbit: Orbit,
    blocks: VariationalBlocks,
    u0: np.ndarray | float,
    horizon: int,
    *,
    mu: float = 2.0,
    start: int = 0,
) -> np.ndarray:
    """Forward-decaying solution of the variational equation with ``u_start = u0``; rows are u_start .. u_{start+horizon}."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    u0 = np.atleast_1d(np.asarray(u0, dtype=float))
    slots = [start + j for j in range(1, horizon + 1)]
    u = _bounded_solution(blocks, slots, u0, forward=True, mu=mu)
    logger.info("stable.vector length=%d horizon=%d start=%d", orbit.length, horizon, start)
    return u


def unstable_vector(
    orbit: Orbit,
    blocks: VariationalBlocks,
    u0: np.ndarray | float,
    horizon: int,
    *,
    mu: float = 2.0,
    start: int = 0,
) -> np.ndarray:
    """Backward-decaying solution; rows are u_start, u_{start-1}, .., u_{start-horizon}."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    u0 = np.atleast_1d(np.asarray(u0, dtype=float))
    slots = [start - j for j in range(1, horizon + 1)]
    u = _bounded_solution(blocks, slots, u0, forward=False, mu=mu)
    logger.info("stable.unstable_vector length=%d horizon=%d start=%d", orbit.length, horizon, start)
    return u
