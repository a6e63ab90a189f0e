import asyncio
import math

from anti_orbits.errors import ArcsinDomainError, ModelInvariantError, NotConvergedError
from anti_orbits.hyperbolicity.cones import ConeReport
from anti_orbits.service.certifier import CertifyService, error_payload
from anti_orbits.workflow.certification import CertificationResult, CertificationWorkflow


def test_error_payload_categories() -> None:
    payload = error_payload(ArcsinDomainError())
    assert payload["type"] == "ArcsinDomainError"
    assert payload["message"] == "left arcsin domain"
    assert payload["category"] == "contraction failure"
    assert payload["hint"]

    invariant = error_payload(ModelInvariantError("wide strip", "strip too narrow"))
    assert invariant["category"] == "invariant: wide strip"

    assert error_payload(RuntimeError("boom"))["category"] == "usage error"


def test_shadow_standard_ok() -> None:
    result = asyncio.run(CertifyService().shadow_standard([0, 0, 0, 0], coupling=12.0))
    assert result["status"] == "ok"
    assert result["orbit"]["points"] == [[0.0]] * 4
    assert result["meta"]["stages"] == ["shadow", "verify"]
    assert result["meta"]["cones"]["pass"] is True
    assert result["meta"]["shadow"]["lambda0"] > 11


def test_shadow_standard_rejects_bad_sigma() -> None:
    result = asyncio.run(CertifyService().shadow_standard([0, 1], coupling=12.0, sigma=2.0))
    assert result["status"] == "error"
    assert result["orbit"] is None


def test_shadow_standard_with_tight_bound_is_an_error() -> None:
    result = asyncio.run(CertifyService().shadow_standard([0, 1], coupling=20.0, bound=math.pi))
    assert result["status"] == "error"
    assert result["meta"]["error"]["category"] == "invariant: code bound"


def test_cone_failure_is_reported(monkeypatch) -> None:
    service = CertifyService()
    real_run = CertificationWorkflow.run

    async def fake_run(self, job) -> CertificationResult:
        result = await real_run(self, job)
        result.cones = ConeReport(passed=False, tier="exact-scalar", mu=1.5, worst_index=2, proof=True)
        return result

    monkeypatch.setattr(CertificationWorkflow, "run", fake_run)
    result = asyncio.run(service.shadow_standard([1, 1, 1], coupling=12.0))
    assert result["status"] == "certification_failed"
    assert result["meta"]["error"]["message"] == "cone condition fails at index 2"
    assert result["meta"]["error"]["category"] == "hyperbolicity failure"


def test_unexpected_error_becomes_error_status(monkeypatch) -> None:
    service = CertifyService()

    async def fake_run(self, job) -> CertificationResult:
        raise RuntimeError("solver crashed")

    monkeypatch.setattr(CertificationWorkflow, "run", fake_run)
    result = asyncio.run(service.shadow_standard([0, 0], coupling=12.0))
    assert result["status"] == "error"
    assert result["meta"]["error"]["message"] == "solver crashed"


def test_convergence_failure_is_a_certification_failure(monkeypatch) -> None:
    service = CertifyService()

    async def fake_run(self, job) -> CertificationResult:
        raise NotConvergedError("no convergence after 3 sweeps")

    monkeypatch.setattr(CertificationWorkflow, "run", fake_run)
    result = asyncio.run(service.shadow_standard([0, 0], coupling=12.0))
    assert result["status"] == "certification_failed"
    assert result["meta"]["error"]["category"] == "convergence failure"


def test_entropy_standard() -> None:
    service = CertifyService()
    ok = service.entropy_standard(20.0, math.pi / 4)
    assert ok["status"] == "ok"
    assert ok["entropy"]["q"] == 7
    bad = service.entropy_standard(20.0, 2.0)
    assert bad["status"] == "error"
    assert bad["meta"]["error"]["category"] == "invariant: sigma range"
