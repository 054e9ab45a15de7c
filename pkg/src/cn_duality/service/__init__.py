"""FastAPI service wrapping the core package; the CLI is a thin client."""

from .app import app
from .handlers import handle_dualize, handle_simulate, handle_verify
from .models import (
    DualizeRequest,
    DualizeResponse,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)

__all__ = [
    "DualizeRequest",
    "DualizeResponse",
    "SimulateRequest",
    "SimulateResponse",
    "VerifyRequest",
    "VerifyResponse",
    "app",
    "handle_dualize",
    "handle_simulate",
    "handle_verify",
]
