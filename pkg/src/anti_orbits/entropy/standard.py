import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

import numpy as np

from anti_orbits.errors import ThresholdError
from anti_orbits.standard_map.params import check_sigma, q_symbols

logger = logging.getLogger(__name__)

SIGMA_GRID = tuple(float(s) for s in np.round(np.arange(1, 31) * 0.05, 2))


@dataclass(frozen=True)
class EntropyBound:
    coupling: float
    sigma: float
    lambda_star: float
    q: int
    bound: float

    def as_meta(self) -> dict[str, Any]:
        return {
            "lambda": self.coupling,
            "sigma": self.sigma,
            "Lambda_star": self.lambda_star,
            "q": self.q,
            "bound_nats": self.bound,
        }


def standard_map_entropy_bound(coupling: float, sigma: float) -> EntropyBound:
    """log q lower bound on the entropy of the compactified standard map."""
    check_sigma(sigma)
    lam = abs(coupling)
    if lam < 8 / math.cos(sigma):
        raise ThresholdError("below threshold, no bound")
    lambda_star = lam * math.sin(sigma) - 4 * sigma
    q = q_symbols(lambda_star) if lambda_star > 0 else 1
    bound = EntropyBound(coupling=coupling, sigma=sigma, lambda_star=lambda_star, q=q, bound=math.log(q))
    logger.info("entropy.standard_bound lambda=%.6g sigma=%.6g q=%d bound=%.6g", coupling, sigma, q, bound.bound)
    return bound


def optimize_sigma(coupling: float, grid: Iterable[float] = SIGMA_GRID) -> EntropyBound:
    """Best bound over a sigma grid; ties keep the smaller sigma."""
    best: EntropyBound | None = None
    for sigma in grid:
        try:
            candidate = standard_map_entropy_bound(coupling, sigma)
        except ThresholdError:
            continue
        if best is None or candidate.bound > best.bound:
            best = candidate
    if best is None:
        raise ThresholdError("below threshold, no bound")
    return best
