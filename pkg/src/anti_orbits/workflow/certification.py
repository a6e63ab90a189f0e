import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from anti_orbits.config import ConeParams, Settings, ShadowConfig, get_settings
from anti_orbits.dls.shadow import Orbit, local_residuals, shadow
from anti_orbits.dls.system import DLSystem
from anti_orbits.entropy.spectral import SpectralReport, spectral_report
from anti_orbits.entropy.standard import EntropyBound, standard_map_entropy_bound
from anti_orbits.errors import GraphError
from anti_orbits.hyperbolicity.blocks import variational_blocks
from anti_orbits.hyperbolicity.cones import ConeReport, cone_verify
from anti_orbits.standard_map.params import StandardMapParams
from anti_orbits.standard_map.shadowing import residual_profile, shadow_code
from anti_orbits.symbolic.codes import Code, StandardCode

logger = logging.getLogger(__name__)

STAGES = ("shadow", "verify", "entropy")


@dataclass
class CertificationJob:
    """One code to certify, either on the standard map (``params``) or on a DLS (``system``)."""

    name: str
    code: Code | StandardCode
    system: DLSystem | None = None
    params: StandardMapParams | None = None
    shadow_config: ShadowConfig | None = None
    cones: ConeParams | None = None
    verify: bool = True
    entropy: bool = True
    seed: int | None = None

    def __post_init__(self) -> None:
        if (self.system is None) == (self.params is None):
            raise GraphError("a job needs exactly one of system or params")
        if self.params is not None and not isinstance(self.code, StandardCode):
            raise GraphError("standard-map jobs take a StandardCode")


@dataclass
class CertificationResult:
    orbit: Orbit
    residuals: np.ndarray
    cones: ConeReport | None = None
    entropy: EntropyBound | SpectralReport | None = None
    stages: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.cones is None or self.cones.passed


class CertificationWorkflow:
    """Sequential shadow -> verify -> entropy pipeline implemented with LangGraph nodes."""

    def __init__(self, settings: Settings | None = None) -> None:
        self.settings = settings or get_settings()

    async def run(self, job: CertificationJob) -> CertificationResult:
        from typing import TypedDict

        from langgraph.graph import END, START, StateGraph

        class WorkflowState(TypedDict):
            orbit: Any
            residuals: Any
            cones: Any
            entropy: Any
            stages: list[str]

        async def shadow_node(state: WorkflowState) -> dict[str, Any]:
            logger.info("shadow")
            orbit = self._shadow(job)
            return {"orbit": orbit, "residuals": self._residuals(job, orbit), "stages": [*state["stages"], "shadow"]}

        async def verify_node(state: WorkflowState) -> dict[str, Any]:
            if not job.verify:
                return {"stages": state["stages"]}
            logger.info("verify")
            orbit = state["orbit"]
            blocks = variational_blocks(orbit, job.params if job.params is not None else job.system)
            rng = np.random.default_rng(self.settings.random_seed if job.seed is None else job.seed)
            report = cone_verify(orbit, blocks, job.cones or ConeParams.from_settings(self.settings), rng=rng)
            return {"cones": report, "stages": [*state["stages"], "verify"]}

        async def entropy_node(state: WorkflowState) -> dict[str, Any]:
            if not job.entropy:
                return {"stages": state["stages"]}
            logger.info("entropy")
            if job.params is not None:
                bound: EntropyBound | SpectralReport = standard_map_entropy_bound(job.params.coupling, job.params.sigma)
            else:
                bound = spectral_report(job.system.graph, self.settings)
            return {"entropy": bound, "stages": [*state["stages"], "entropy"]}

        graph = StateGraph(WorkflowState)
        graph.add_node("shadow_step", shadow_node)
        graph.add_node("verify_step", verify_node)
        graph.add_node("entropy_step", entropy_node)
        graph.add_edge(START, "shadow_step")
        graph.add_edge("shadow_step", "verify_step")
        graph.add_edge("verify_step", "entropy_step")
        graph.add_edge("entropy_step", END)

        app = graph.compile()
        logger.info("certify.start job=%s length=%d verify=%s entropy=%s", job.name, len(job.code), job.verify, job.entropy)
        try:
            final_state = await app.ainvoke({"orbit": None, "residuals": None, "cones": None, "entropy": None, "stages": []})
        except Exception as exc:
            logger.error("certify.error job=%s type=%s detail=%s", job.name, exc.__class__.__name__, exc)
            raise

        return CertificationResult(
            orbit=final_state["orbit"],
            residuals=final_state["residuals"],
            cones=final_state.get("cones"),
            entropy=final_state.get("entropy"),
            stages=list(final_state.get("stages", [])),
        )

    def _shadow(self, job: CertificationJob) -> Orbit:
        config = job.shadow_config or ShadowConfig.from_settings(self.settings)
        if job.params is not None:
            return shadow_code(job.code, job.params, config)
        return shadow(job.code, job.system, config)

    @staticmethod
    def _residuals(job: CertificationJob, orbit: Orbit) -> np.ndarray:
        if job.params is not None:
            return residual_profile(job.code, orbit.x, job.params.coupling)
        return local_residuals(orbit, job.system)
