"""Request handlers shared by the HTTP endpoints and the CLI.

Handlers validate semantics the pydantic layer cannot (chamber conditions,
state length against n), run the core package, and translate results into
response models.  They raise package errors; transports map those to HTTP
status codes or exit codes.
"""

from __future__ import annotations

import numpy as np

from .. import simulate as sim
from ..duality import dualize_r_to_s, dualize_s_to_r
from ..errors import DomainError
from ..phase_space import CouplingParams, RsvdState, SutherlandState
from ..verify import run_verify
from .models import (
    DualizeRequest,
    DualizeResponse,
    SimulateRequest,
    SimulateResponse,
    SolverRun,
    VerifyCheck,
    VerifyRequest,
    VerifyResponse,
)


def handle_simulate(req: SimulateRequest) -> SimulateResponse:
    if len(req.initial_state) != 2 * req.n:
        raise DomainError(
            f"initial_state must have 2n = {2 * req.n} entries, got {len(req.initial_state)}"
        )
    c = CouplingParams(req.g, req.g2)
    state0 = sim.make_state(req.model, req.initial_state)
    rk4_dt = float(req.tolerances.get("rk4_dt", sim.DEFAULT_RK4_DT))
    if rk4_dt <= 0:
        raise DomainError("rk4_dt must be positive")
    results = sim.run_simulation(
        req.model, state0, c, req.t_end, req.samples, req.solver, rk4_dt
    )
    runs = [
        SolverRun(
            solver=r.solver,
            csv=sim.to_csv(r),
            rows=len(r.times),
            energy_drift=r.energy_drift(),
            action_drift=r.action_drift(),
            aborted=r.aborted,
            abort_reason=r.abort_reason,
            last_safe_t=r.last_safe_t,
        )
        for r in results
    ]
    dev = sim.deviation(results[0], results[1]) if len(results) == 2 else None
    status = "aborted" if any(r.aborted for r in runs) else "ok"
    return SimulateResponse(
        status=status,
        model=req.model,
        n=req.n,
        runs=runs,
        deviation=dev,
        config=req.model_dump(),
    )


def handle_dualize(req: DualizeRequest) -> DualizeResponse:
    if len(req.state) != 2 * req.n:
        raise DomainError(f"state must have 2n = {2 * req.n} entries, got {len(req.state)}")
    c = CouplingParams(req.g, req.g2)
    half = req.n
    first, second = req.state[:half], req.state[half:]
    if req.direction == "s2r":
        st = dualize_s_to_r(SutherlandState(first, second), c)
        mapped = [*st.lam, *st.theta]
        back = dualize_r_to_s(st, c)
        residual = float(
            max(np.max(np.abs(back.q - np.asarray(first))), np.max(np.abs(back.p - np.asarray(second))))
        )
    else:
        s = dualize_r_to_s(RsvdState(first, second), c)
        mapped = [*s.q, *s.p]
        back = dualize_s_to_r(s, c)
        residual = float(
            max(
                np.max(np.abs(back.lam - np.asarray(first))),
                np.max(np.abs(back.theta - np.asarray(second))),
            )
        )
    return DualizeResponse(
        direction=req.direction,
        input_state=list(map(float, req.state)),
        mapped_state=[float(v) for v in mapped],
        roundtrip_residual=residual,
    )


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    report = run_verify(
        seed=req.seed, n_max=req.n_max, draws=req.draws, tolerances=req.tolerances or None
    )
    return VerifyResponse(
        seed=report.seed,
        n_max=report.n_max,
        draws=report.draws,
        overall_pass=report.overall_pass,
        checks=[
            VerifyCheck(
                name=r.name,
                identity=r.identity,
                max_residual=r.max_residual,
                tolerance=r.tolerance,
                passed=r.passed,
            )
            for r in report.checks
        ],
    )
