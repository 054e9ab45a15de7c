"""Independent verification tools: direct integration and FD brackets.

Everything here deliberately avoids the spectral machinery.  Hamilton's
equations are integrated with a fixed-step classical RK4 whose right-hand
side is built from *central finite differences* of the Hamiltonian itself,
so no hand-coded derivative can share a bug with the exact solvers.

The phase-space bracket convention is {coordinate_a, momentum_b} = delta/2,
i.e. flows follow

    Sutherland:  qdot = +1/2 dH/dp,      pdot   = -1/2 dH/dq,
    RSvD:        lamdot = -1/2 dH/dtheta, thetadot = +1/2 dH/dlam,

matching the factor-2 symplectic forms of the reduced phase spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, IntegrationAborted
from .phase_space import CouplingParams, RsvdState, SutherlandState
from .rsvd import hamiltonian_r
from .sutherland import hamiltonian_s

FD_STEP = 1e-6
MAX_HALVINGS = 24


@dataclass(frozen=True)
class BracketConvention:
    """Bracket of a conjugate coordinate pair; 1/2 throughout this package."""

    scale: float = 0.5


def _fd_grad(fn: Callable[[np.ndarray], float], u: np.ndarray, step: float) -> np.ndarray:
    grad = np.empty_like(u)
    for i in range(u.size):
        up = u.copy()
        dn = u.copy()
        up[i] += step
        dn[i] -= step
        grad[i] = (fn(up) - fn(dn)) / (2.0 * step)
    return grad


def _rk4_step(deriv, u: np.ndarray, h: float) -> np.ndarray:
    k1 = deriv(u)
    k2 = deriv(u + 0.5 * h * k1)
    k3 = deriv(u + 0.5 * h * k2)
    k4 = deriv(u + h * k3)
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _advance(deriv, validate, u: np.ndarray, h: float, t_now: float, depth: int) -> np.ndarray:
    # Step halving: retry across the half-steps whenever the stencil or the
    # result leaves the chamber.
    if depth > MAX_HALVINGS:
        raise IntegrationAborted(
            f"integration left the chamber near t={t_now:.6g}", last_time=t_now
        )
    try:
        u_new = _rk4_step(deriv, u, h)
        validate(u_new)
        return u_new
    except DomainError:
        mid = _advance(deriv, validate, u, h / 2.0, t_now, depth + 1)
        return _advance(deriv, validate, mid, h / 2.0, t_now + h / 2.0, depth + 1)


def _run(deriv, make_state, u0: np.ndarray, t_end: float, dt: float) -> list:
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t_end < 0.0:
        raise ValueError("t_end must be non-negative")
    out = [(0.0, make_state(u0))]
    u = u0
    nsteps = int(np.ceil(t_end / dt - 1e-12)) if t_end > 0 else 0
    for k in range(nsteps):
        t0 = k * dt
        t1 = min((k + 1) * dt, t_end)
        u = _advance(deriv, make_state, u, t1 - t0, t0, 0)
        out.append((t1, make_state(u)))
    return out


def rk4_sutherland(
    s0: SutherlandState,
    c: CouplingParams,
    t_end: float,
    dt: float = 1e-3,
    fd_step: float = FD_STEP,
    scale: float = BracketConvention().scale,
) -> list[tuple[float, SutherlandState]]:
    """Sampled Sutherland trajectory from direct integration."""
    n = s0.n

    def make_state(u: np.ndarray) -> SutherlandState:
        return SutherlandState(u[:n], u[n:])

    def energy(u: np.ndarray) -> float:
        return hamiltonian_s(make_state(u), c)

    def deriv(u: np.ndarray) -> np.ndarray:
        grad = _fd_grad(energy, u, fd_step)
        return np.concatenate([scale * grad[n:], -scale * grad[:n]])

    return _run(deriv, make_state, np.concatenate([s0.q, s0.p]), t_end, dt)


def rk4_rsvd(
    st0: RsvdState,
    c: CouplingParams,
    t_end: float,
    dt: float = 1e-3,
    fd_step: float = FD_STEP,
    scale: float = BracketConvention().scale,
) -> list[tuple[float, RsvdState]]:
    """Sampled RSvD trajectory from direct integration."""
    n = st0.n

    def make_state(u: np.ndarray) -> RsvdState:
        return RsvdState(u[:n], u[n:])

    def energy(u: np.ndarray) -> float:
        return hamiltonian_r(make_state(u), c)

    def deriv(u: np.ndarray) -> np.ndarray:
        grad = _fd_grad(energy, u, fd_step)
        return np.concatenate([-scale * grad[n:], scale * grad[:n]])

    return _run(deriv, make_state, np.concatenate([st0.lam, st0.theta]), t_end, dt)


def fd_poisson(
    f: Callable[[np.ndarray, np.ndarray], float],
    h: Callable[[np.ndarray, np.ndarray], float],
    coords: np.ndarray,
    momenta: np.ndarray,
    step: float = 1e-4,
    convention: BracketConvention = BracketConvention(),
) -> float:
    """Central-difference estimate of the bracket {f, h} at one point.

    ``coords`` and ``momenta`` are the conjugate slots of the phase space the
    fields live on; for the RSvD space the coordinate slot is theta and the
    momentum slot is lam.
    """
    coords = np.asarray(coords, dtype=np.float64)
    momenta = np.asarray(momenta, dtype=np.float64)

    def partials(fn) -> tuple[np.ndarray, np.ndarray]:
        dc = np.empty_like(coords)
        dm = np.empty_like(momenta)
        for i in range(coords.size):
            cp, cm = coords.copy(), coords.copy()
            cp[i] += step
            cm[i] -= step
            dc[i] = (fn(cp, momenta) - fn(cm, momenta)) / (2.0 * step)
        for i in range(momenta.size):
            mp, mm = momenta.copy(), momenta.copy()
            mp[i] += step
            mm[i] -= step
            dm[i] = (fn(coords, mp) - fn(coords, mm)) / (2.0 * step)
        return dc, dm

    fc, fm = partials(f)
    hc, hm = partials(h)
    return convention.scale * float(np.sum(fc * hm - fm * hc))


def fd_bracket_matrix(
    mapping: Callable[[np.ndarray, np.ndarray], np.ndarray],
    coords: np.ndarray,
    momenta: np.ndarray,
    step: float = 1e-5,
    convention: BracketConvention = BracketConvention(),
) -> np.ndarray:
    """All pairwise brackets of the components of a vector-valued map.

    Returns K with K[i, j] = {mapping_i, mapping_j}; one FD Jacobian sweep
    instead of a quadratic number of fd_poisson calls.
    """
    coords = np.asarray(coords, dtype=np.float64)
    momenta = np.asarray(momenta, dtype=np.float64)
    m = np.asarray(mapping(coords, momenta)).size
    jc = np.empty((m, coords.size))
    jm = np.empty((m, momenta.size))
    for i in range(coords.size):
        cp, cm = coords.copy(), coords.copy()
        cp[i] += step
        cm[i] -= step
        jc[:, i] = (np.asarray(mapping(cp, momenta)) - np.asarray(mapping(cm, momenta))) / (
            2.0 * step
        )
    for i in range(momenta.size):
        mp, mm = momenta.copy(), momenta.copy()
        mp[i] += step
        mm[i] -= step
        jm[:, i] = (np.asarray(mapping(coords, mp)) - np.asarray(mapping(coords, mm))) / (
            2.0 * step
        )
    return convention.scale * (jc @ jm.T - jm @ jc.T)
