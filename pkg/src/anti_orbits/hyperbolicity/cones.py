import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from anti_orbits.config import ConeParams, get_settings
from anti_orbits.dls.shadow import Orbit
from anti_orbits.errors import TwistFailure
from anti_orbits.hyperbolicity.blocks import VariationalBlocks, predict_next

logger = logging.getLogger(__name__)

TWIST_CONDITION_LIMIT = 1e12

TIER_DEGENERATE = "ai-limit-degenerate"
TIER_EXACT = "exact-scalar"
TIER_NORM = "norm-bound"
TIER_SAMPLED = "sampled"


@dataclass(frozen=True)
class ConeReport:
    passed: bool
    tier: str
    mu: float
    worst_index: int | None
    proof: bool

    @property
    def log_mu(self) -> float | None:
        if not self.passed or not math.isfinite(self.mu) or self.mu <= 0:
            return None
        return math.log(self.mu)

    def as_meta(self) -> dict[str, Any]:
        return {
            "pass": self.passed,
            "tier": self.tier,
            "mu": self.mu,
            "worst_index": self.worst_index,
            "log_mu": self.log_mu,
        }


def _check_twist(blocks: VariationalBlocks) -> None:
    for k, slot in enumerate(blocks.indices):
        for block in (blocks.g_plus[k], blocks.g_minus[k]):
            singular = np.linalg.svd(block, compute_uv=False)
            if singular[-1] == 0.0 or singular[0] / singular[-1] > TWIST_CONDITION_LIMIT:
                logger.info("cones.twist_failure index=%d", slot)
                raise TwistFailure(slot)


def _min_abs_affine(a: float, b: float, half_width: float) -> float:
    """min of |a + b s| over |s| <= half_width."""
    lo, hi = a - b * half_width, a + b * half_width
    if lo * hi <= 0:
        return 0.0
    return min(abs(lo), abs(hi))


def _exact_scalar(blocks: VariationalBlocks, cones: ConeParams) -> ConeReport:
    passed = True
    mu = math.inf
    worst: int | None = None
    for k, slot in enumerate(blocks.indices):
        gm, gc, gp = float(blocks.g_minus[k][0, 0]), float(blocks.g_center[k][0, 0]), float(blocks.g_plus[k][0, 0])
        # u_i = 1, u_{i-1} = s in [-alpha_H, alpha_H]: u_{i+1} = -(gc + gm s) / gp
        forward = _min_abs_affine(-gc / gp, -gm / gp, cones.alpha_h)
        # u_i = 1, u_{i+1} = t in [-alpha_V, alpha_V]: u_{i-1} = -(gc + gp t) / gm
        backward = _min_abs_affine(-gc / gm, -gp / gm, cones.alpha_v)
        if forward <= 1 / cones.alpha_h or backward <= 1 / cones.alpha_v:
            passed = False
        local = max(1.0, min(forward, backward))
        if local < mu:
            mu, worst = local, slot
    passed = passed and mu >= cones.mu
    return ConeReport(passed=passed, tier=TIER_EXACT, mu=mu, worst_index=worst, proof=True)


def _norm_bound(blocks: VariationalBlocks, cones: ConeParams) -> bool:
    if cones.alpha_h != 0.5 or cones.alpha_v != 0.5 or cones.mu > 2:
        return False
    delta = blocks.norm_bound
    denominator = 1 - 1.5 * delta
    return denominator > 0 and delta / denominator < 0.5


def _unit(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _sampled(blocks: VariationalBlocks, cones: ConeParams, rng: np.random.Generator) -> ConeReport:
    passed = True
    mu = math.inf
    worst: int | None = None
    for k, slot in enumerate(blocks.indices):
        u = _unit(rng, cones.samples, blocks.dim)
        edge = cones.alpha_h * _unit(rng, cones.samples, blocks.dim)
        nxt = -np.linalg.solve(blocks.g_plus[k], (blocks.g_minus[k] @ edge.T + blocks.g_center[k] @ u.T)).T
        norm_next = np.linalg.norm(nxt, axis=1)
        inside_h = np.all(1.0 < cones.alpha_h * norm_next)
        growth_h = float(np.min(np.maximum(1.0, norm_next)))

        u = _unit(rng, cones.samples, blocks.dim)
        edge = cones.alpha_v * _unit(rng, cones.samples, blocks.dim)
        prev = -np.linalg.solve(blocks.g_minus[k], (blocks.g_center[k] @ u.T + blocks.g_plus[k] @ edge.T)).T
        norm_prev = np.linalg.norm(prev, axis=1)
        inside_v = np.all(1.0 < cones.alpha_v * norm_prev)
        growth_v = float(np.min(np.maximum(1.0, norm_prev)))

        if not (inside_h and inside_v):
            passed = False
        local = min(growth_h, growth_v)
        if local < mu:
            mu, worst = local, slot
    passed = passed and mu >= cones.mu
    return ConeReport(passed=passed, tier=TIER_SAMPLED, mu=mu, worst_index=worst, proof=False)


def cone_verify(
    orbit: Orbit,
    blocks: VariationalBlocks,
    cones: ConeParams | None = None,
    *,
    rng: np.random.Generator | None = None,
) -> ConeReport:
    """Check that H-cones map strictly into H-cones forward, V-cones into V-cones backward, with growth mu.

    Pairs are measured in the max norm of the two slots.
    """
    cones = cones or ConeParams.from_settings()
    if blocks.degenerate:
        report = ConeReport(passed=True, tier=TIER_DEGENERATE, mu=math.inf, worst_index=None, proof=False)
        logger.info("cones.verified tier=%s length=%d", report.tier, orbit.length)
        return report
    _check_twist(blocks)
    if blocks.dim == 1:
        report = _exact_scalar(blocks, cones)
    elif _norm_bound(blocks, cones):
        report = ConeReport(passed=True, tier=TIER_NORM, mu=2.0, worst_index=None, proof=True)
    else:
        rng = rng or np.random.default_rng(get_settings().random_seed)
        report = _sampled(blocks, cones, rng)
    logger.info(
        "cones.verified tier=%s pass=%s mu=%.6g worst_index=%s length=%d",
        report.tier,
        report.passed,
        report.mu,
        report.worst_index,
        orbit.length,
    )
    return report


def propagate(blocks: VariationalBlocks, slot: int, pair: tuple[np.ndarray, np.ndarray], steps: int) -> np.ndarray:
    """Apply the variational recurrence from ``(u_{slot-1}, u_slot)``; returns ``u_{slot-1} .. u_{slot+steps}``."""
    u_prev = np.atleast_1d(np.asarray(pair[0], dtype=float))
    u = np.atleast_1d(np.asarray(pair[1], dtype=float))
    out = [u_prev, u]
    for j in range(steps):
        k = blocks.position(slot + j)
        u_prev, u = u, predict_next(blocks, k, u_prev, u)
        out.append(u)
    return np.asarray(out)


def lyapunov_lower_bound(report: ConeReport) -> float | None:
    """log mu of a certified orbit."""
    return report.log_mu
