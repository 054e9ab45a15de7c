"""FastAPI application wrapping the core package.

Error mapping: bad inputs (chamber violations, dimension mismatches, pole
configurations) become 400; degenerate-spectrum failures become 409 so
clients can distinguish "fix your request" from "this point of the flow is
singular".  Simulation aborts are not errors: a partial trajectory comes
back as status "aborted" with the last safe time.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import (
    DomainError,
    IntegrationAborted,
    InvalidDimensionError,
    InvalidOrbitVector,
    PoleError,
    RegularityViolation,
    SingularInputError,
)
from .handlers import handle_dualize, handle_simulate, handle_verify
from .models import (
    DualizeRequest,
    DualizeResponse,
    HealthResponse,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)

BAD_REQUEST_ERRORS = (
    DomainError,
    InvalidDimensionError,
    InvalidOrbitVector,
    PoleError,
    SingularInputError,
    ValueError,
)

app = FastAPI(
    title="cn-duality",
    version=__version__,
    description="Exact solvers, duality map and verification suite for a dual "
    "pair of integrable many-body models.",
)


def _guard(fn, req):
    try:
        return fn(req)
    except BAD_REQUEST_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except (RegularityViolation, IntegrationAborted) as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    return _guard(handle_simulate, req)


@app.post("/dualize", response_model=DualizeResponse)
def dualize(req: DualizeRequest) -> DualizeResponse:
    return _guard(handle_dualize, req)


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    return _guard(handle_verify, req)
