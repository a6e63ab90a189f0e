import logging

from fastapi import FastAPI

from anti_orbits.api.schemas import (
    StandardEntropyRequest,
    StandardEntropyResponse,
    StandardShadowRequest,
    StandardShadowResponse,
)
from anti_orbits.config import get_settings
from anti_orbits.service.certifier import CertifyService

logging.basicConfig(
    level=get_settings().log_level,
    format="%(asctime)s %(levelname)s %(name)s %(message)s",
)

app = FastAPI(title="anti-orbits", version="0.1.0")
service = CertifyService()


@app.get("/healthz")
async def healthz() -> dict:
    return {"status": "ok"}


@app.post("/standard/shadow", response_model=StandardShadowResponse)
async def standard_shadow(req: StandardShadowRequest) -> StandardShadowResponse:
    result = await service.shadow_standard(
        req.multiples,
        coupling=req.coupling,
        periodic=req.periodic,
        sigma=req.sigma,
        bound=req.bound,
        winding=req.winding,
        verify=req.verify,
    )
    return StandardShadowResponse(**result)


@app.post("/standard/entropy", response_model=StandardEntropyResponse)
async def standard_entropy(req: StandardEntropyRequest) -> StandardEntropyResponse:
    result = service.entropy_standard(req.coupling, req.sigma)
    return StandardEntropyResponse(**result)
