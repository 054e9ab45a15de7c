"""The hyperbolic Sutherland model with two couplings.

The Hamiltonian is

    H = 1/2 sum_c p_c^2
        + sum_{a<b} g^2 / sinh^2(q_a - q_b) + g^2 / sinh^2(q_a + q_b)
        + 1/2 sum_c g2^2 / sinh^2(2 q_c),

its Lax matrix L(q, p) is Hermitian, anticommutes with C, carries (p, -p) on
the diagonal, and satisfies tr(L^2)/4 = H.  The exact solver exploits that
the time evolution only conjugates L: positions come from the paired
eigendecomposition of the matrix flow e^{Q0} e^{tL0/2} (e^{Q0} e^{tL0/2})*,
and momenta are read off the conjugated Lax diagonal.

Convention: the phase-space bracket is {q_a, p_b} = delta_{ab} / 2 and flows
solve df/dt = {f, H}, so qdot = p/2.  The scale is pinned by the requirement
that the spectral solver and direct integration of Hamilton's equations agree
(see the oracle module and the cross-validation tests).
"""

from __future__ import annotations

import warnings

import numpy as np

from . import matkit
from .errors import RegularityViolation
from .matkit import build_c, eig_paired_expp, eig_paired_p, expm
from .orbit import momentum_residual, orbit_vector_e, xi_of
from .phase_space import CouplingParams, SutherlandState


def hamiltonian_s(s: SutherlandState, c: CouplingParams) -> float:
    q, p = s.q, s.p
    h = 0.5 * float(np.sum(p * p))
    h += 0.5 * float(np.sum((c.g2 / np.sinh(2.0 * q)) ** 2))
    if s.n > 1:
        iu = np.triu_indices(s.n, 1)
        diff = (q[:, None] - q[None, :])[iu]
        tot = (q[:, None] + q[None, :])[iu]
        h += float(np.sum((c.g / np.sinh(diff)) ** 2 + (c.g / np.sinh(tot)) ** 2))
    return h


def lax_l(s: SutherlandState, c: CouplingParams) -> np.ndarray:
    """The Sutherland Lax matrix; Hermitian, anticommutes with C."""
    n = s.n
    q, p = s.q, s.p
    l = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for a in range(n):
        l[a, a] = p[a]
        l[n + a, n + a] = -p[a]
        l[a, n + a] = 1j * c.g2 / np.sinh(2.0 * q[a])
        l[n + a, a] = -1j * c.g2 / np.sinh(2.0 * q[a])
        for b in range(n):
            if a == b:
                continue
            l[a, b] = -1j * c.g / np.sinh(q[a] - q[b])
            l[n + a, n + b] = 1j * c.g / np.sinh(q[a] - q[b])
            l[a, n + b] = 1j * c.g / np.sinh(q[a] + q[b])
            l[n + a, b] = -1j * c.g / np.sinh(q[a] + q[b])
    return l


def action_variables(s: SutherlandState, c: CouplingParams, tol: float = matkit.GAP_TOL) -> np.ndarray:
    """Positive eigenvalues of the Lax matrix, sorted decreasing."""
    return eig_paired_p(lax_l(s, c), tol).positive_part


def momentum_residual_s(s: SutherlandState, c: CouplingParams) -> float:
    """Constraint residual of the level-set point (e^Q, L(q,p), xi(E))."""
    n = s.n
    y = np.diag(np.exp(np.concatenate([s.q, -s.q]))).astype(np.complex128)
    return momentum_residual(y, lax_l(s, c), xi_of(orbit_vector_e(n), c))


def solve_flow_s(
    s0: SutherlandState,
    c: CouplingParams,
    t: float,
    generator: np.ndarray | None = None,
    tol: float = matkit.GAP_TOL,
) -> SutherlandState:
    """Exact state at time t of the flow generated by H (default) or by the
    invariant with gradient ``generator`` at L0.

    Steps: B(t) = e^{Q0} expm(t G) with G = L0/2; diagonalize B B* to get
    Q(t) and the left frame; undo the factorization to get the right frame;
    conjugate L0 by it and read p(t) off the first n diagonal entries.
    """
    n = s0.n
    l0 = lax_l(s0, c)
    gen = 0.5 * l0 if generator is None else np.asarray(generator, dtype=np.complex128)
    eq0 = np.exp(np.concatenate([s0.q, -s0.q]))
    b = eq0[:, None] * expm(t * gen)
    try:
        spec = eig_paired_expp(b @ b.conj().T, tol)
    except RegularityViolation as exc:
        raise RegularityViolation(f"Sutherland flow degenerate at t={t:.6g}: {exc}") from exc
    q_t = spec.positive_part
    # u = e^{-Q(t)} etaL* B is the inverse right frame; L(t) = u L0 u*.
    u = np.exp(-np.concatenate([q_t, -q_t]))[:, None] * (spec.frame.mat.conj().T @ b)
    l_t = u @ l0 @ u.conj().T
    diag = np.diagonal(l_t)[:n]
    imag = float(np.max(np.abs(diag.imag)))
    if imag > 1e-8:
        warnings.warn(
            f"momentum diagonal has imaginary residue {imag:.3e}", RuntimeWarning, stacklevel=2
        )
    return SutherlandState(q_t, diag.real.copy())


def lax_structure_residuals(s: SutherlandState, c: CouplingParams) -> dict[str, float]:
    """Frobenius defects of L* = L, LC + CL = 0 and tr(L^2)/4 = H."""
    l = lax_l(s, c)
    cc = build_c(s.n)
    return {
        "hermitian": matkit.frob(l - l.conj().T),
        "anticommute": matkit.frob(l @ cc + cc @ l),
        "trace_energy": abs(float(np.real(np.trace(l @ l))) / 4.0 - hamiltonian_s(s, c)),
    }
