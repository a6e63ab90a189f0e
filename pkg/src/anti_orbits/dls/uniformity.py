import itertools
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

import numpy as np

from anti_orbits.config import Settings, ShadowConfig, get_settings
from anti_orbits.dls.fields import Box
from anti_orbits.dls.shadow import resolve_sigma
from anti_orbits.dls.system import DLSystem, EdgeData
from anti_orbits.errors import GraphError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UniformityReport:
    """Sampled uniform anti-integrability constants.

    ``eps`` is the sampled sup of |D^2 u| and ``lip_sigma`` the sampled sup of
    |(D^2 Psi)^-1| over the sigma-balls; ``eps_c1`` (sup |Du|) is informational.
    """

    r_min: float
    lip_max: float
    lip_sigma: float
    eps: float
    eps_c1: float
    sigma: float
    contraction_bound: float
    satisfied: bool
    sampled: bool = True

    def as_meta(self) -> dict[str, Any]:
        return {
            "r_min": self.r_min,
            "lip_max": self.lip_max,
            "lip_sigma": self.lip_sigma,
            "eps": self.eps,
            "eps_c1": self.eps_c1,
            "sigma": self.sigma,
            "contraction_bound": self.contraction_bound,
            "satisfied": self.satisfied,
            "eps_estimate": "sampled" if self.sampled else "exact",
        }


def _ball_points(center: np.ndarray, sigma: float, grid: int, rng: np.random.Generator, count: int) -> np.ndarray:
    box = Box.around(center, sigma)
    return np.vstack([box.grid(grid), box.sample(rng, count)])


def _unique_edges(edges: Iterable[EdgeData]) -> list[EdgeData]:
    seen: dict[tuple[int, tuple[float, ...]], EdgeData] = {}
    for edge in edges:
        seen.setdefault((id(edge.psi), tuple(np.round(edge.point, 12))), edge)
    return list(seen.values())


def uniformity_report(
    system: DLSystem,
    config: ShadowConfig | None = None,
    *,
    settings: Settings | None = None,
    rng: np.random.Generator | None = None,
) -> UniformityReport:
    settings = settings or get_settings()
    config = config or ShadowConfig.from_settings(settings)
    rng = rng or np.random.default_rng(settings.random_seed)
    edges = _unique_edges(system.representative_edges())
    if not edges:
        raise GraphError("system has no edges")
    sigma = resolve_sigma(config, system)
    grid = settings.uniformity_grid_points
    count = settings.uniformity_random_points

    lip_sigma = 0.0
    for edge in edges:
        for x in _ball_points(edge.point, sigma, grid, rng, count):
            inv = np.linalg.inv(np.atleast_2d(edge.psi.hess(x)))
            lip_sigma = max(lip_sigma, float(np.linalg.norm(inv, 2)))

    # anchors entering / leaving every piece
    incoming: dict[Any, dict[tuple[float, ...], np.ndarray]] = {}
    outgoing: dict[Any, dict[tuple[float, ...], np.ndarray]] = {}
    for eid, data in system.edge_data.items():
        edge = system.graph.edge(eid)
        key = tuple(np.round(data.point, 12))
        incoming.setdefault(edge.dst, {})[key] = data.point
        outgoing.setdefault(edge.src, {})[key] = data.point

    eps = 0.0
    eps_c1 = 0.0
    for vertex, piece in system.pieces.items():
        if piece.coupling.is_zero:
            continue
        for a_in in incoming.get(vertex, {}).values():
            for a_out in outgoing.get(vertex, {}).values():
                xs = _ball_points(a_in, sigma, grid, rng, count)
                ys = _ball_points(a_out, sigma, grid, rng, count)
                pairs = list(itertools.product(xs[: grid ** xs.shape[1]], ys[: grid ** ys.shape[1]]))
                pairs += list(zip(xs[-count:], ys[-count:]))
                for x, y in pairs:
                    hxx, hxy, hyy = piece.coupling.hess(x, y)
                    block = np.block([[hxx, hxy], [hxy.T, hyy]])
                    eps = max(eps, float(np.linalg.norm(block, 2)))
                    gx, gy = piece.coupling.grad(x, y)
                    eps_c1 = max(eps_c1, float(np.linalg.norm(np.concatenate([gx, gy]))))

    bound = 2.0 * lip_sigma * eps
    satisfied = bound < sigma and bound < 0.5
    report = UniformityReport(
        r_min=min(e.radius for e in edges),
        lip_max=max(e.lip_phi for e in edges),
        lip_sigma=lip_sigma,
        eps=eps,
        eps_c1=eps_c1,
        sigma=sigma,
        contraction_bound=bound,
        satisfied=satisfied,
    )
    logger.info(
        "uniformity.report system=%s eps=%.3e lip_sigma=%.3e bound=%.3e sigma=%.3e satisfied=%s",
        system.name,
        eps,
        lip_sigma,
        bound,
        sigma,
        satisfied,
    )
    return report
