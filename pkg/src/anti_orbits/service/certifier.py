import logging
from typing import Any

from pydantic import ValidationError

from anti_orbits.artifacts import to_jsonable
from anti_orbits.entropy.standard import standard_map_entropy_bound
from anti_orbits.errors import AntiOrbitsError, CertificationError, ModelInvariantError
from anti_orbits.standard_map.params import StandardMapParams
from anti_orbits.symbolic.codes import StandardCode, widen_bound
from anti_orbits.workflow.certification import STAGES, CertificationJob, CertificationResult, CertificationWorkflow

logger = logging.getLogger(__name__)

_HINTS = {
    "contraction failure": "耦合不足以压缩：请增大 λ，或减小编码的二阶差分界 Λ",
    "convergence failure": "迭代未收敛：请调大 SHADOW_MAX_ITERATIONS 或放宽 SHADOW_TOLERANCE",
    "critical point failure": "请检查临界点种子是否落在非退化临界点附近",
    "hyperbolicity failure": "请检查扭转条件与锥参数 CONE_ALPHA_H/CONE_ALPHA_V/CONE_MU",
    "threshold failure": "λ 低于阈值 8/cos σ，无法给出熵下界",
}


class CertifyService:
    def __init__(self, workflow: CertificationWorkflow | None = None) -> None:
        self.workflow = workflow or CertificationWorkflow()

    async def certify(self, job: CertificationJob) -> dict:
        try:
            result = await self.workflow.run(job)
            report = self._report(job, result)
            logger.info(
                "certify.meta job=%s residual=%.3e rho=%.3e certified=%s",
                job.name,
                result.orbit.residual,
                result.orbit.rho,
                result.certified,
            )
            if not result.certified:
                report["meta"]["error"] = {
                    "type": "ConeFailure",
                    "message": f"cone condition fails at index {result.cones.worst_index}",
                    "category": "hyperbolicity failure",
                    "hint": _HINTS["hyperbolicity failure"],
                }
                return {"status": "certification_failed", **report}
            return {"status": "ok", **report}
        except CertificationError as exc:
            logger.warning("certify.failed job=%s category=%s message=%s", job.name, exc.category, exc)
            return self._failure("certification_failed", exc)
        except Exception as exc:
            logger.exception("certify.error job=%s", job.name)
            return self._failure("error", exc)

    async def shadow_standard(
        self,
        multiples: list[int],
        *,
        coupling: float,
        periodic: bool = True,
        sigma: float | None = None,
        bound: float | None = None,
        winding: int = 0,
        verify: bool = True,
    ) -> dict:
        try:
            params = StandardMapParams(coupling=coupling, **self._optional(sigma=sigma, bound=bound))
            code = StandardCode(tuple(multiples), periodic=periodic, bound=params.bound, winding=winding)
            if bound is None:
                code = widen_bound(code)
            job = CertificationJob(name="standard", code=code, params=params, verify=verify, entropy=False)
        except (AntiOrbitsError, ValidationError) as exc:
            logger.info("certify.rejected reason=%s", exc)
            return self._failure("error", exc)
        return await self.certify(job)

    def entropy_standard(self, coupling: float, sigma: float) -> dict:
        try:
            bound = standard_map_entropy_bound(coupling, sigma)
        except CertificationError as exc:
            logger.info("entropy.failed lambda=%g sigma=%g message=%s", coupling, sigma, exc)
            return {"status": "certification_failed", "entropy": None, "meta": {"error": error_payload(exc)}}
        except AntiOrbitsError as exc:
            return {"status": "error", "entropy": None, "meta": {"error": error_payload(exc)}}
        return {"status": "ok", "entropy": bound.as_meta(), "meta": {"stages": ["entropy"]}}

    @staticmethod
    def _optional(**values: Any) -> dict[str, Any]:
        return {k: v for k, v in values.items() if v is not None}

    def _failure(self, status: str, exc: Exception) -> dict:
        return {
            "status": status,
            "orbit": None,
            "meta": {"stages": list(STAGES), "error": error_payload(exc)},
        }

    @staticmethod
    def _report(job: CertificationJob, result: CertificationResult) -> dict[str, Any]:
        orbit = result.orbit
        report = {
            "orbit": {
                "points": orbit.points,
                "local_residual": result.residuals,
            },
            "meta": {
                "job": job.name,
                "stages": result.stages,
                "shadow": {**orbit.as_meta(), **orbit.extras},
                "cones": result.cones.as_meta() if result.cones is not None else None,
                "entropy": result.entropy.as_meta() if result.entropy is not None else None,
            },
        }
        return to_jsonable(report)


def error_payload(exc: Exception) -> dict[str, Any]:
    if isinstance(exc, CertificationError):
        category = exc.category
    elif isinstance(exc, ModelInvariantError):
        category = f"invariant: {exc.invariant}"
    else:
        category = "usage error"
    return {
        "type": exc.__class__.__name__,
        "message": str(exc),
        "category": category,
        "hint": _HINTS.get(category, "请查看服务日志中的 certify.error 详情"),
    }
