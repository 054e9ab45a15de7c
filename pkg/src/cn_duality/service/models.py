"""Pydantic request/response models for the service and the CLI client.

These are the wire contract: the HTTP endpoints and the CLI subcommands both
speak exactly these shapes, so a config file is just a serialized request.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class SimulateRequest(BaseModel):
    model: Literal["sutherland", "rsvd"]
    n: int = Field(ge=1)
    g: float
    g2: float
    initial_state: list[float]
    t_end: float
    samples: int = Field(ge=2)
    solver: Literal["spectral", "rk4", "both"] = "spectral"
    seed: int = 0
    tolerances: dict[str, float] = Field(default_factory=dict)


class SolverRun(BaseModel):
    solver: str
    csv: str
    rows: int
    energy_drift: float
    action_drift: float
    aborted: bool = False
    abort_reason: Optional[str] = None
    last_safe_t: Optional[float] = None


class SimulateResponse(BaseModel):
    status: Literal["ok", "aborted"]
    model: str
    n: int
    runs: list[SolverRun]
    deviation: Optional[float] = None
    config: dict


class DualizeRequest(BaseModel):
    direction: Literal["s2r", "r2s"]
    n: int = Field(ge=1)
    g: float
    g2: float
    state: list[float]


class DualizeResponse(BaseModel):
    direction: str
    input_state: list[float]
    mapped_state: list[float]
    roundtrip_residual: float


class VerifyRequest(BaseModel):
    seed: int = 0
    n_max: int = Field(default=4, ge=1, le=6)
    draws: int = Field(default=40, ge=1)
    tolerances: dict[str, float] = Field(default_factory=dict)


class VerifyCheck(BaseModel):
    name: str
    identity: str
    max_residual: float
    tolerance: float
    passed: bool


class VerifyResponse(BaseModel):
    seed: int
    n_max: int
    draws: int
    overall_pass: bool
    checks: list[VerifyCheck]


class HealthResponse(BaseModel):
    status: str
    version: str
