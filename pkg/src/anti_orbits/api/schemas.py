import math

from pydantic import BaseModel, Field


class StandardShadowRequest(BaseModel):
    multiples: list[int] = Field(..., min_length=1, description="Code entries a_k = m_k * pi as integers m_k.")
    periodic: bool = Field(default=True, description="Repeat the code cyclically instead of pinning a window.")
    coupling: float = Field(..., description="Coupling lambda of the standard map.")
    sigma: float = Field(default=math.pi / 4, description="Uniqueness radius in (0, pi/2).")
    bound: float | None = Field(default=None, description="Bound Lambda on the code second differences; defaults to the code's own.")
    winding: int = Field(default=0, description="Rotation number w of a periodic code: a_{k+p} = a_k + 2 pi w.")
    verify: bool = Field(default=True, description="Run the cone check after shadowing.")


class StandardShadowResponse(BaseModel):
    status: str
    orbit: dict | None
    meta: dict


class StandardEntropyRequest(BaseModel):
    coupling: float = Field(..., description="Coupling lambda of the standard map.")
    sigma: float = Field(default=math.pi / 4, description="Uniqueness radius in (0, pi/2).")


class StandardEntropyResponse(BaseModel):
    status: str
    entropy: dict | None
    meta: dict
