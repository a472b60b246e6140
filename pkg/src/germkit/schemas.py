"""Request and response models for the HTTP service.

Every operation the CLI exposes has a POST endpoint taking one of these
models; responses are always a CommandResult rendered by the deterministic
dumper, never framework-default JSON.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class SeriesDoc(BaseModel):
    """Wire form of a truncated series; validated again by series_from_json."""

    order: int
    coeffs: list


class CommandResult(BaseModel):
    status: Literal["ok", "error"]
    payload: dict
    diagnostics: list[str] = Field(default_factory=list)
    version: str


class NormalFormRequest(BaseModel):
    series: SeriesDoc
    order: int | None = None
    root_order: int | None = Field(default=None, ge=1)


class ClassifyPairRequest(BaseModel):
    m: int = Field(ge=2)
    k: int = Field(ge=2)
    g_scale: str
    bound: int = Field(default=10, ge=1)


class RelationsRequest(BaseModel):
    f: SeriesDoc
    g: SeriesDoc
    max_len: int = Field(default=8, ge=1)


class SharedIterRequest(BaseModel):
    f: SeriesDoc
    g: SeriesDoc
    max_m: int = Field(default=6, ge=1)
    max_n: int = Field(default=6, ge=1)


class LevinRequest(BaseModel):
    f: SeriesDoc
    g: SeriesDoc
    k: int = Field(ge=1)
    l: int = Field(ge=1)


class FindHyperbolicRequest(BaseModel):
    c1: list[float] = Field(min_length=2, max_length=2)
    theta1: float
    c2: list[float] = Field(min_length=2, max_length=2)
    theta2: float
    max_len: int = Field(default=8, ge=1)


class PingPongRequest(BaseModel):
    a1: list[float] = Field(min_length=2, max_length=2)
    b1: list[float] = Field(min_length=2, max_length=2)
    a2: list[float] = Field(min_length=2, max_length=2)
    b2: list[float] = Field(min_length=2, max_length=2)
    samples: int = Field(default=256, ge=8)


class OrbitRequest(BaseModel):
    poly: list[list[float]]  # coefficients highest degree first, [re, im]
    z0: list[float] = Field(min_length=2, max_length=2)
    n: int = Field(ge=0)


class IntersectRequest(BaseModel):
    f_poly: list[list[float]]
    g_poly: list[list[float]]
    z0: list[float] = Field(min_length=2, max_length=2)
    n: int = Field(ge=0)
    tol: float = 1e-9


class RuellePushRequest(BaseModel):
    poly: list[list[float]]
    phi_b64: str  # GridField binary blob, base64
    grid: int | None = Field(default=None, ge=1)
    bounds: list[float] | None = Field(default=None, min_length=4, max_length=4)


class TransportRequest(BaseModel):
    f_poly: list[list[float]]
    g_poly: list[list[float]]
    n: int = Field(ge=1)
    k: int = Field(ge=1)
    samples: list[list[float]] | None = None
    unit_roots: int | None = Field(default=None, ge=1)
    max_iter: int = Field(default=256, ge=1)
    tol: float = 1e-9
