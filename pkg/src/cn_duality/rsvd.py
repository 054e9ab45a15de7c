"""The rational RSvD model: z-functions, the Lax matrix A, and the linear-flow solver.

The Lax matrix is assembled in two independent ways and cross-checked on
every call: the compact Cauchy-like form

    A_{kl} = (F_k conj(F_l) + eps C_{kl}) / (1 + x_k - x_l),
    x_a = -x_{n+a} = lam_a / (2 i g),

and the explicit four-block entry formulas in terms of e^{theta}, |z| and
2ig / (2ig + lam_a -+ lam_b).  A is Hermitian, positive definite, satisfies
A C A = C, and tr(A)/2 equals the Hamiltonian

    H = sum_c cosh(2 theta_c) (1 + g2^2/lam_c^2)^{1/2}
        prod_{a != c} (1 + 4g^2/(lam_c - lam_a)^2)^{1/2}
                      (1 + 4g^2/(lam_c + lam_a)^2)^{1/2}.

The exact solver diagonalizes the *linear* matrix flow L0 - t grad_f1(A0^{1/2})
to get lam(t), reconstructs A(t) by conjugating A0 with the eigenframe, and
recovers theta from the gauge-invariant diagonal A(t)_{aa} = e^{2 theta_a} |z_a|.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import matkit
from .cauchy import CauchyContext, w_values
from .errors import NotPositiveDefiniteError, RegularityViolation, StructureViolation
from .matkit import build_c, eig_paired_p, frob, sqrt_posdef
from .orbit import momentum_residual, xi_of
from .phase_space import CHAMBER_MARGIN, CouplingParams, RsvdState, check_chamber


def x_vector(lam: np.ndarray, c: CouplingParams) -> np.ndarray:
    """The purely imaginary generating vector x_a = lam_a / (2ig), x_{n+a} = -x_a."""
    half = np.asarray(lam, dtype=np.float64) / (2j * c.g)
    return np.concatenate([half, -half])


def z_of(lam: np.ndarray, c: CouplingParams) -> np.ndarray:
    """The n complex values z_a; evaluated directly and re-derived from the
    w-functions as a built-in consistency check."""
    lam = np.asarray(lam, dtype=np.float64).reshape(-1)
    check_chamber(lam, CHAMBER_MARGIN, "lam")
    n = lam.size
    z = np.empty(n, dtype=np.complex128)
    for a in range(n):
        val = -(1.0 + 1j * c.g2 / lam[a])
        for d in range(n):
            if d == a:
                continue
            val *= (1.0 + 2j * c.g / (lam[a] - lam[d])) * (1.0 + 2j * c.g / (lam[a] + lam[d]))
        z[a] = val

    x = x_vector(lam, c)
    w = w_values(CauchyContext(x, c_symmetric=True))
    z_w = -w[:n] * (1.0 - c.eps / (1.0 + 2.0 * x[:n]))
    defect = float(np.max(np.abs(z - z_w)))
    if defect > 1e-10 * (1.0 + float(np.max(np.abs(z)))):
        raise StructureViolation(f"z evaluation paths disagree by {defect:.3e}")
    return z


def z_values(st: RsvdState, c: CouplingParams) -> np.ndarray:
    return z_of(st.lam, c)


def f_vector(st: RsvdState, c: CouplingParams, z: np.ndarray | None = None) -> np.ndarray:
    """F_a = e^{theta_a} |z_a|^{1/2}, F_{n+a} = e^{-theta_a} conj(z_a) |z_a|^{-1/2}."""
    if z is None:
        z = z_values(st, c)
    root = np.sqrt(np.abs(z))
    return np.concatenate([np.exp(st.theta) * root, np.exp(-st.theta) * z.conj() / root])


@dataclass(frozen=True)
class RsvdLaxBundle:
    """The Lax matrix with its square root and the derived vectors."""

    a: np.ndarray
    r: np.ndarray
    f: np.ndarray
    v: np.ndarray
    z: np.ndarray
    x: np.ndarray


def _lax_blockwise(st: RsvdState, c: CouplingParams, z: np.ndarray) -> np.ndarray:
    n = st.n
    lam, theta = st.lam, st.theta
    root = np.sqrt(np.abs(z))
    tg = 2j * c.g
    out = np.empty((2 * n, 2 * n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            out[a, b] = np.exp(theta[a] + theta[b]) * root[a] * root[b] * tg / (tg + lam[a] - lam[b])
            out[n + a, n + b] = (
                np.exp(-theta[a] - theta[b])
                * z[a].conj() * z[b] / (root[a] * root[b])
                * tg / (tg - lam[a] + lam[b])
            )
            val = (
                np.exp(theta[a] - theta[b])
                * z[b] * root[a] / root[b]
                * tg / (tg + lam[a] + lam[b])
            )
            if a == b:
                val += 1j * (c.g - c.g2) / (1j * c.g + lam[a])
            out[a, n + b] = val
            out[n + b, a] = val.conjugate()
    return out


def lax_a(st: RsvdState, c: CouplingParams) -> RsvdLaxBundle:
    """Assemble the Lax matrix, its positive square root R and V = R^{-1} F.

    Raises StructureViolation if the compact and blockwise assemblies
    disagree, if positivity fails, or if any bundle invariant
    (A C A = C, V*V = N, C V + V = 0, R^2 = A) is violated -- all of those
    indicate an implementation bug rather than bad input.
    """
    n = st.n
    cc = build_c(n)
    z = z_values(st, c)
    x = x_vector(st.lam, c)
    f = f_vector(st, c, z)

    a_compact = (np.outer(f, f.conj()) + c.eps * cc) / (1.0 + x[:, None] - x[None, :])
    a_block = _lax_blockwise(st, c, z)
    entry_defect = float(np.max(np.abs(a_compact - a_block)))
    if entry_defect > 1e-10 * (1.0 + float(np.max(np.abs(a_compact)))):
        raise StructureViolation(f"Lax assemblies disagree entrywise by {entry_defect:.3e}")

    a = (a_compact + a_compact.conj().T) / 2.0
    scale = max(1.0, frob(a))
    try:
        r = sqrt_posdef(a)
    except NotPositiveDefiniteError as exc:
        raise StructureViolation(f"Lax matrix lost positivity: {exc}") from exc
    v = np.linalg.solve(r, f)

    group_defect = frob(a @ cc @ a - cc)
    if group_defect > 1e-9 * scale**2:
        raise StructureViolation(f"A C A = C violated by {group_defect:.3e}")
    # The V constraints degrade with the eigensolver's eps * cond(A); allow
    # that (with headroom) before declaring a bug.
    cond = float(np.linalg.norm(a, 2)) ** 2
    v_tol = max(1e-9, 32.0 * np.finfo(float).eps * cond)
    norm_defect = abs(float(np.real(v.conj() @ v)) - 2 * n)
    refl_defect = float(np.linalg.norm(cc @ v + v))
    if norm_defect > v_tol or refl_defect > v_tol:
        raise StructureViolation(
            f"V constraints violated: |V*V-N|={norm_defect:.3e}, ||CV+V||={refl_defect:.3e}"
        )
    if frob(r @ r - a) > 1e-10 * scale:
        raise StructureViolation("square root defect exceeds tolerance")
    return RsvdLaxBundle(a, r, f, v, z, x)


def hamiltonian_r(st: RsvdState, c: CouplingParams) -> float:
    lam, theta = st.lam, st.theta
    n = st.n
    terms = np.cosh(2.0 * theta) * np.sqrt(1.0 + (c.g2 / lam) ** 2)
    if n > 1:
        off = ~np.eye(n, dtype=bool)
        diff = np.where(off, lam[:, None] - lam[None, :], 1.0)
        tot = lam[:, None] + lam[None, :]
        fac = np.where(off, (1.0 + (2.0 * c.g / diff) ** 2) * (1.0 + (2.0 * c.g / tot) ** 2), 1.0)
        terms = terms * np.sqrt(np.prod(fac, axis=1))
    return float(np.sum(terms))


def reduced_observables(st: RsvdState, c: CouplingParams, r: int) -> tuple[float, float]:
    """Closed forms of the two commuting observable families at order r.

    phi_r = (2/r) sum lam^r for even r (zero for odd);
    psi_r = 2 sum lam^r |z| sinh(2 theta) for odd r, cosh for even.
    """
    if r < 1:
        raise ValueError("order r must be >= 1")
    lam, theta = st.lam, st.theta
    absz = np.abs(z_values(st, c))
    phi = (2.0 / r) * float(np.sum(lam**r)) if r % 2 == 0 else 0.0
    stretch = np.sinh(2.0 * theta) if r % 2 else np.cosh(2.0 * theta)
    psi = 2.0 * float(np.sum(lam**r * absz * stretch))
    return phi, psi


def observables_trace(st: RsvdState, c: CouplingParams, r: int) -> tuple[float, float]:
    """The same observables evaluated from their trace definitions at the
    constructed level-set point (A^{1/2}, diag(lam, -lam), xi(V))."""
    if r < 1:
        raise ValueError("order r must be >= 1")
    bundle = lax_a(st, c)
    big_y = np.diag(np.concatenate([st.lam, -st.lam])).astype(np.complex128)
    y = bundle.r
    rho = xi_of(bundle.v, c)
    n2 = 2 * st.n
    zmat = rho / (1j * c.g) + np.eye(n2) - c.eps * build_c(st.n)
    sandwich = y.conj().T @ zmat @ y
    yr = np.linalg.matrix_power(big_y, r)
    yhr = np.linalg.matrix_power(big_y.conj().T, r)
    phi = float(np.real(np.trace(yr) + np.trace(yhr))) / (2.0 * r)
    psi = float(np.real(np.trace(yr @ sandwich) + np.trace(yhr @ sandwich))) / 2.0
    return phi, psi


def momentum_residual_r(st: RsvdState, c: CouplingParams) -> float:
    """Constraint residual of the level-set point (A^{1/2}, diag(lam,-lam), xi(V))."""
    bundle = lax_a(st, c)
    big_y = np.diag(np.concatenate([st.lam, -st.lam])).astype(np.complex128)
    return momentum_residual(bundle.r, big_y, xi_of(bundle.v, c))


def grad_f1(a_half: np.ndarray) -> np.ndarray:
    """Gradient of f1(y) = tr(y y*)/2 at a Hermitian group element.

    Closed form (A - C A C)/2 with A = a_half^2; validated against the
    finite-difference directional derivative of f1 in the test suite.
    """
    a_half = np.asarray(a_half, dtype=np.complex128)
    if frob(a_half - a_half.conj().T) > matkit.STRUCTURE_TOL * max(1.0, frob(a_half)):
        raise StructureViolation("gradient point must be Hermitian")
    a = a_half @ a_half
    cc = build_c(a.shape[0] // 2)
    return (a - cc @ a @ cc) / 2.0


def solve_flow_r(
    st0: RsvdState,
    c: CouplingParams,
    t: float,
    gradient: np.ndarray | None = None,
    tol: float = matkit.GAP_TOL,
) -> RsvdState:
    """Exact state at time t of the flow generated by H (default) or by the
    invariant with group gradient ``gradient`` at A0^{1/2}.

    On an eigenvalue collision of the linear flow the largest safe time
    toward t is located by bisection and reported in the error.
    """
    bundle = lax_a(st0, c)
    gen = grad_f1(bundle.r) if gradient is None else np.asarray(gradient, dtype=np.complex128)
    l0 = np.diag(np.concatenate([st0.lam, -st0.lam])).astype(np.complex128)
    a0 = bundle.a
    n = st0.n

    def state_at(s: float) -> RsvdState:
        spec = eig_paired_p(l0 - s * gen, tol)
        eta = spec.frame.mat
        a_s = eta.conj().T @ a0 @ eta
        diag = np.diagonal(a_s)[:n]
        imag = float(np.max(np.abs(diag.imag)))
        if imag > 1e-8:
            warnings.warn(
                f"Lax diagonal has imaginary residue {imag:.3e}", RuntimeWarning, stacklevel=2
            )
        if np.any(diag.real <= 0.0):
            raise StructureViolation("reconstructed Lax matrix lost positivity on the diagonal")
        absz = np.abs(z_of(spec.positive_part, c))
        theta = 0.5 * np.log(diag.real / absz)
        return RsvdState(spec.positive_part, theta)

    try:
        return state_at(t)
    except RegularityViolation as exc:
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            try:
                state_at(mid * t)
                lo = mid
            except RegularityViolation:
                hi = mid
        raise RegularityViolation(
            f"linear flow degenerate at t={t:.6g}; largest safe time ~ {lo * t:.6g}: {exc}"
        ) from exc
