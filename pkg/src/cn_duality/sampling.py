"""Random draws of states, couplings and structured matrices.

Used by the verification suite and the tests.  Draws are kept comfortably
inside the open chamber (gap floors well above the chamber margin) so that
residual tolerances measure algebra, not conditioning at the walls.
"""

from __future__ import annotations

import numpy as np

from .matkit import build_c, expm
from .phase_space import CouplingParams, RsvdState, SutherlandState


def random_couplings(
    rng: np.random.Generator, bound: float = 3.0, floor: float = 0.05
) -> CouplingParams:
    """Uniform couplings on [-bound, bound] with |g|, |g2| >= floor."""

    def draw() -> float:
        while True:
            v = float(rng.uniform(-bound, bound))
            if abs(v) >= floor:
                return v

    return CouplingParams(draw(), draw())


def _chamber_vector(
    rng: np.random.Generator, n: int, gap_lo: float, gap_hi: float, base: float = 0.0
) -> np.ndarray:
    gaps = rng.uniform(gap_lo, gap_hi, size=n)
    return base + np.cumsum(gaps)[::-1].copy()


def random_sutherland_state(
    rng: np.random.Generator, n: int, momentum_scale: float = 1.0
) -> SutherlandState:
    q = _chamber_vector(rng, n, 0.3, 1.0)
    p = rng.uniform(-momentum_scale, momentum_scale, size=n)
    return SutherlandState(q, p)


def random_rsvd_state(
    rng: np.random.Generator,
    n: int,
    theta_scale: float = 1.0,
    couplings: CouplingParams | None = None,
) -> RsvdState:
    """Random RSvD state; when couplings are given the lam spacing scales
    with them so the Lax matrix stays well conditioned (its condition number
    grows with the |z| products, which blow up when gaps << |2g|)."""
    if couplings is None:
        gap_lo, base = 0.3, 0.0
    else:
        gap_lo = max(0.3, 1.8 * abs(couplings.g))
        base = max(0.3, 0.6 * abs(couplings.g2))
    lam = _chamber_vector(rng, n, gap_lo, gap_lo + 0.7, base)
    theta = rng.uniform(-theta_scale, theta_scale, size=n)
    return RsvdState(lam, theta)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_k_element(rng: np.random.Generator, n: int) -> np.ndarray:
    """A random unitary commuting with C, via the block-diagonalizing basis."""
    u1 = random_unitary(rng, n)
    u2 = random_unitary(rng, n)
    return 0.5 * np.block([[u1 + u2, u1 - u2], [u1 - u2, u1 + u2]])


def random_p_element(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """A random Hermitian matrix anticommuting with C."""
    w = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = scale * (w + w.conj().T) / 2.0
    w2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = scale * (w2 - w2.conj().T) / 2.0
    return np.block([[h, s], [-s, -h]])


def random_group_element(rng: np.random.Generator, n: int, scale: float = 0.7) -> np.ndarray:
    """A random element of the group, exp(p-part) times a K element."""
    return expm(random_p_element(rng, n, scale)) @ random_k_element(rng, n)


def random_orbit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    """A random vector with V*V = N and C V + V = 0."""
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w *= np.sqrt(n) / np.linalg.norm(w)
    v = np.concatenate([w, -w])
    c = build_c(n)
    assert np.linalg.norm(c @ v + v) < 1e-12
    return v
