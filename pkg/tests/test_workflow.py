import asyncio
import logging
import math

import pytest

from anti_orbits.errors import ArcsinDomainError, GraphError
from anti_orbits.models.kick import kick_code, standard_map_system
from anti_orbits.standard_map.params import StandardMapParams
from anti_orbits.symbolic.codes import StandardCode
from anti_orbits.workflow.certification import CertificationJob, CertificationWorkflow


def test_sequential_logs_order(caplog) -> None:
    job = CertificationJob(name="fixed", code=StandardCode((1, 1, 1), periodic=True), params=StandardMapParams(coupling=12.0))
    workflow = CertificationWorkflow()

    with caplog.at_level(logging.INFO):
        result = asyncio.run(workflow.run(job))

    assert result.orbit.residual <= 1e-12
    assert result.certified
    assert result.stages == ["shadow", "verify", "entropy"]
    assert result.entropy.q == 3

    messages = [record.getMessage() for record in caplog.records]
    shadow_idx = messages.index("shadow")
    verify_idx = messages.index("verify")
    entropy_idx = messages.index("entropy")
    assert shadow_idx < verify_idx < entropy_idx


def test_skipped_stages_are_not_recorded(caplog) -> None:
    job = CertificationJob(
        name="plain",
        code=StandardCode((0, 0, 0), periodic=True),
        params=StandardMapParams(coupling=12.0),
        verify=False,
        entropy=False,
    )
    with caplog.at_level(logging.INFO):
        result = asyncio.run(CertificationWorkflow().run(job))

    assert result.stages == ["shadow"]
    assert result.cones is None
    assert result.certified
    messages = [record.getMessage() for record in caplog.records]
    assert "verify" not in messages
    assert "entropy" not in messages


def test_dls_job_uses_the_spectral_entropy() -> None:
    system = standard_map_system(12.0)
    code, _ = kick_code(system, StandardCode((1, 1, 0, 0), periodic=True))
    result = asyncio.run(CertificationWorkflow().run(CertificationJob(name="lifted", code=code, system=system)))
    assert result.certified
    assert result.entropy.entropy > 0
    assert len(result.residuals) == 4


def test_failure_is_logged_and_raised(caplog) -> None:
    job = CertificationJob(
        name="weak",
        code=StandardCode((0, 1), periodic=True, bound=2 * math.pi),
        params=StandardMapParams(coupling=2.0),
    )
    with caplog.at_level(logging.INFO), pytest.raises(ArcsinDomainError):
        asyncio.run(CertificationWorkflow().run(job))
    assert any(r.getMessage().startswith("certify.error job=weak") for r in caplog.records)


def test_job_needs_exactly_one_target() -> None:
    with pytest.raises(GraphError):
        CertificationJob(name="none", code=StandardCode((0,), periodic=True))
    system = standard_map_system(12.0)
    with pytest.raises(GraphError):
        CertificationJob(name="both", code=StandardCode((0,), periodic=True), system=system, params=StandardMapParams(coupling=12.0))
