import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from anti_orbits.config import Settings, get_settings
from anti_orbits.errors import GraphError, NotConvergedError
from anti_orbits.symbolic.graph import TransitionGraph, count_words

logger = logging.getLogger(__name__)

NO_RECURRENT_PART = "no recurrent part"


@dataclass(frozen=True)
class SpectralReport:
    spectral_radius: float
    entropy: float
    iterations: int
    core_vertices: int
    flag: str | None = None

    def as_meta(self) -> dict[str, Any]:
        return {
            "spectral_radius": self.spectral_radius,
            "entropy_nats": self.entropy,
            "iterations": self.iterations,
            "core_vertices": self.core_vertices,
            "flag": self.flag,
        }


def spectral_report(graph: TransitionGraph, settings: Settings | None = None) -> SpectralReport:
    """Perron root of the recurrent core by power iteration on A + I from the all-ones vector."""
    settings = settings or get_settings()
    if not graph.vertices:
        raise GraphError("graph has no vertices")
    core = graph.recurrent_core()
    if not core.vertices:
        logger.info("entropy.spectral flag=%s vertices=%d", NO_RECURRENT_PART, len(graph.vertices))
        return SpectralReport(spectral_radius=0.0, entropy=0.0, iterations=0, core_vertices=0, flag=NO_RECURRENT_PART)

    shifted = core.adjacency().astype(float) + np.eye(len(core.vertices))
    v = np.ones(len(core.vertices))
    estimate = 0.0
    for iteration in range(1, settings.entropy_max_iterations + 1):
        w = shifted @ v
        current = float(w.sum() / v.sum())
        v = w / np.max(w)
        if abs(current - estimate) <= settings.entropy_tolerance * current:
            estimate = current
            break
        estimate = current
    else:
        raise NotConvergedError("power iteration did not converge")

    radius = estimate - 1.0
    entropy = max(0.0, math.log(radius)) if radius > 0 else 0.0
    logger.info(
        "entropy.spectral core=%d radius=%.12g entropy=%.12g iterations=%d",
        len(core.vertices),
        radius,
        entropy,
        iteration,
    )
    return SpectralReport(spectral_radius=radius, entropy=entropy, iterations=iteration, core_vertices=len(core.vertices))


def tmc_entropy(graph: TransitionGraph, settings: Settings | None = None) -> float:
    return spectral_report(graph, settings).entropy


def word_count_entropy(graph: TransitionGraph, n_max: int, limit: int | None = None) -> list[float]:
    """h_n = log(theta_n) / n for n = 1 .. n_max."""
    limit = limit if limit is not None else get_settings().word_count_limit
    out = []
    for n in range(1, n_max + 1):
        theta = count_words(graph, n, limit)
        out.append(math.log(theta) / n if theta > 0 else -math.inf)
    return out
