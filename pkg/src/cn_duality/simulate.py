"""Trajectory sampling and deterministic CSV serialization.

Grids are uniform in t.  The spectral solvers evaluate each sample time
independently from the initial state (exact, and the one-parameter group
property makes that equivalent to stepping); the RK4 solver integrates
segment by segment with a step that divides each segment exactly, so sample
times are hit without interpolation.

CSV output is byte-stable: 17 significant digits, '.' decimal point, ','
separator, '\\n' line ends, one header row.  A near-collision abort keeps
every completed row and reports the last safe time; it never emits a
truncated row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .errors import DomainError, IntegrationAborted, RegularityViolation
from .matkit import eig_paired_expp
from .phase_space import CouplingParams, RsvdState, SutherlandState
from .rsvd import hamiltonian_r, lax_a, solve_flow_r
from .sutherland import action_variables, hamiltonian_s, solve_flow_s

MODELS = ("sutherland", "rsvd")
SOLVERS = ("spectral", "rk4", "both")
DEFAULT_RK4_DT = 1e-3


def dual_actions_r(st: RsvdState, c: CouplingParams) -> np.ndarray:
    """Conserved actions of the RSvD flow: positive log-half spectrum of A."""
    return eig_paired_expp(lax_a(st, c).a).positive_part


@dataclass
class TrajectoryResult:
    model: str
    solver: str
    n: int
    times: list[float]
    coords: list[np.ndarray]
    momenta: list[np.ndarray]
    energies: list[float]
    actions: list[np.ndarray]
    aborted: bool = False
    abort_reason: str | None = None
    last_safe_t: float | None = None

    def energy_drift(self) -> float:
        if len(self.energies) < 2:
            return 0.0
        return float(max(abs(e - self.energies[0]) for e in self.energies))

    def action_drift(self) -> float:
        if len(self.actions) < 2:
            return 0.0
        ref = self.actions[0]
        return float(max(np.max(np.abs(a - ref)) for a in self.actions))


def sample_times(t_end: float, samples: int) -> list[float]:
    if samples < 2:
        raise DomainError("samples must be >= 2")
    if not (t_end > 0.0) or not math.isfinite(t_end):
        raise DomainError("t_end must be positive and finite")
    return [i * t_end / (samples - 1) for i in range(samples)]


def make_state(model: str, values: list[float]):
    values = list(map(float, values))
    if len(values) % 2:
        raise DomainError("initial state must have 2n entries")
    n = len(values) // 2
    if n == 0:
        raise DomainError("initial state must be non-empty")
    if model == "sutherland":
        return SutherlandState(values[:n], values[n:])
    if model == "rsvd":
        return RsvdState(values[:n], values[n:])
    raise DomainError(f"unknown model {model!r}")


def _observe(model: str, state, c: CouplingParams) -> tuple[np.ndarray, np.ndarray, float, np.ndarray]:
    if model == "sutherland":
        return state.q, state.p, hamiltonian_s(state, c), action_variables(state, c)
    return state.lam, state.theta, hamiltonian_r(state, c), dual_actions_r(state, c)


def run_trajectory(
    model: str,
    state0,
    c: CouplingParams,
    t_end: float,
    samples: int,
    solver: str,
    rk4_dt: float = DEFAULT_RK4_DT,
) -> TrajectoryResult:
    """Sample one trajectory with one solver; partial results on abort."""
    times = sample_times(t_end, samples)
    result = TrajectoryResult(model, solver, state0.n, [], [], [], [], [])

    def record(t: float, state) -> None:
        coords, momenta, energy, actions = _observe(model, state, c)
        result.times.append(t)
        result.coords.append(np.array(coords))
        result.momenta.append(np.array(momenta))
        result.energies.append(energy)
        result.actions.append(np.array(actions))

    if solver == "spectral":
        flow = solve_flow_s if model == "sutherland" else solve_flow_r
        for t in times:
            try:
                record(t, flow(state0, c, t))
            except RegularityViolation as exc:
                result.aborted = True
                result.abort_reason = str(exc)
                result.last_safe_t = result.times[-1] if result.times else 0.0
                break
    elif solver == "rk4":
        integrate = oracle.rk4_sutherland if model == "sutherland" else oracle.rk4_rsvd
        state = state0
        try:
            record(times[0], state)
            for prev, t in zip(times, times[1:]):
                span = t - prev
                steps = max(1, int(math.ceil(span / rk4_dt - 1e-12)))
                state = integrate(state, c, span, dt=span / steps)[-1][1]
                record(t, state)
        except IntegrationAborted as exc:
            result.aborted = True
            result.abort_reason = str(exc)
            result.last_safe_t = result.times[-1] if result.times else 0.0
    else:
        raise DomainError(f"unknown solver {solver!r}")
    return result


def run_simulation(
    model: str,
    state0,
    c: CouplingParams,
    t_end: float,
    samples: int,
    solver: str,
    rk4_dt: float = DEFAULT_RK4_DT,
) -> list[TrajectoryResult]:
    if solver not in SOLVERS:
        raise DomainError(f"solver must be one of {SOLVERS}, got {solver!r}")
    wanted = ["spectral", "rk4"] if solver == "both" else [solver]
    return [run_trajectory(model, state0, c, t_end, samples, s, rk4_dt) for s in wanted]


def deviation(a: TrajectoryResult, b: TrajectoryResult) -> float:
    """Sup-norm deviation of state columns over the common sample prefix."""
    rows = min(len(a.times), len(b.times))
    worst = 0.0
    for i in range(rows):
        worst = max(worst, float(np.max(np.abs(a.coords[i] - b.coords[i]))))
        worst = max(worst, float(np.max(np.abs(a.momenta[i] - b.momenta[i]))))
    return worst


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def to_csv(result: TrajectoryResult) -> str:
    n = result.n
    if result.model == "sutherland":
        cnames = [f"q_{i + 1}" for i in range(n)]
        mnames = [f"p_{i + 1}" for i in range(n)]
    else:
        cnames = [f"lambda_{i + 1}" for i in range(n)]
        mnames = [f"theta_{i + 1}" for i in range(n)]
    header = ["t", *cnames, *mnames, "energy", *[f"action_{i + 1}" for i in range(n)]]
    lines = [",".join(header)]
    for i, t in enumerate(result.times):
        row = [t, *result.coords[i], *result.momenta[i], result.energies[i], *result.actions[i]]
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"
