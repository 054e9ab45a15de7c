"""The canonical map between the two phase spaces, and its inverse.

Both directions rest on the same fact: the Sutherland point (e^Q, L(q,p))
and the RSvD point (A^{1/2}, diag(lam, -lam)) parametrize the *same*
constrained level set, so matching the two parametrizations spectrally
converts one set of coordinates into the other.

Forward (Sutherland -> RSvD): lam is the positive spectrum of L; the frame
that diagonalizes L conjugates e^{2Q} into the Lax matrix A, whose diagonal
e^{2 theta_a} |z_a| yields theta.  Backward: q is the positive log-half
spectrum of A; unwinding the factorization A^{1/2} = etaL e^Q etaR^{-1}
gives the frame that conjugates diag(lam, -lam) into L(q, p), whose diagonal
yields p.

All cross-checks between analytically built and spectrally reconstructed
matrices compare gauge-invariant data only (spectra, diagonal entries, entry
moduli): the frames themselves are defined only up to diagonal phase pairs.
"""

from __future__ import annotations

import warnings

import numpy as np

from . import matkit
from .errors import StructureViolation
from .matkit import eig_paired_expp, eig_paired_p
from .orbit import OrbitPoint, orbit_point, orbit_vector_e, xi_of  # noqa: F401 (re-export)
from .phase_space import CouplingParams, RsvdState, SutherlandState
from .rsvd import lax_a, z_of
from .sutherland import lax_l

SPECTRUM_TOL = 1e-8
MODULI_TOL = 1e-7


def _check_gauge_match(built: np.ndarray, reconstructed: np.ndarray, what: str) -> None:
    # Equality up to conjugation by diagonal phases: compare spectra and |entries|.
    ev_b = np.linalg.eigvalsh(built)
    ev_r = np.linalg.eigvalsh(reconstructed)
    scale = 1.0 + float(np.max(np.abs(ev_b)))
    spec_defect = float(np.max(np.abs(ev_b - ev_r)))
    if spec_defect > SPECTRUM_TOL * scale:
        raise StructureViolation(f"{what}: spectra disagree by {spec_defect:.3e}")
    mod_defect = float(np.max(np.abs(np.abs(built) - np.abs(reconstructed))))
    if mod_defect > MODULI_TOL * scale:
        raise StructureViolation(f"{what}: entry moduli disagree by {mod_defect:.3e}")


def _positive_diagonal(mat: np.ndarray, n: int, what: str) -> np.ndarray:
    diag = np.diagonal(mat)[:n]
    imag = float(np.max(np.abs(diag.imag)))
    if imag > 1e-8:
        warnings.warn(f"{what} has imaginary residue {imag:.3e}", RuntimeWarning, stacklevel=3)
    if np.any(diag.real <= 0.0):
        raise StructureViolation(f"{what} is not positive")
    return diag.real.copy()


def dualize_s_to_r(
    s: SutherlandState, c: CouplingParams, tol: float = matkit.GAP_TOL
) -> RsvdState:
    """Map (q, p) to (lam, theta)."""
    spec = eig_paired_p(lax_l(s, c), tol)
    lam = spec.positive_part
    eta_r = spec.frame.mat
    e2q = np.exp(np.concatenate([2.0 * s.q, -2.0 * s.q]))
    a_rec = eta_r.conj().T @ (e2q[:, None] * eta_r)
    diag = _positive_diagonal(a_rec, s.n, "reconstructed Lax diagonal")
    theta = 0.5 * np.log(diag / np.abs(z_of(lam, c)))
    result = RsvdState(lam, theta)
    _check_gauge_match(lax_a(result, c).a, a_rec, "dualized Lax matrix")
    return result


def dualize_r_to_s(
    st: RsvdState, c: CouplingParams, tol: float = matkit.GAP_TOL
) -> SutherlandState:
    """Map (lam, theta) to (q, p)."""
    bundle = lax_a(st, c)
    spec = eig_paired_expp(bundle.a, tol)
    q = spec.positive_part
    eta_l = spec.frame.mat
    eq = np.exp(np.concatenate([q, -q]))
    eta_r = np.linalg.solve(bundle.r, eta_l) * eq[None, :]
    big_l = np.concatenate([st.lam, -st.lam])
    l_rec = eta_r.conj().T @ (big_l[:, None] * eta_r)
    p = np.real(np.diagonal(l_rec)[: st.n]).copy()
    imag = float(np.max(np.abs(np.diagonal(l_rec)[: st.n].imag)))
    if imag > 1e-8:
        warnings.warn(
            f"momentum diagonal has imaginary residue {imag:.3e}", RuntimeWarning, stacklevel=2
        )
    result = SutherlandState(q, p)
    _check_gauge_match(lax_l(result, c), l_rec, "dualized Lax matrix")
    return result


def pullback_coords(
    s: SutherlandState, c: CouplingParams, tol: float = matkit.GAP_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Action-angle coordinates (lam_hat, theta_hat) of a Sutherland point."""
    st = dualize_s_to_r(s, c, tol)
    return st.lam, st.theta


def pullback_coords_r(
    st: RsvdState, c: CouplingParams, tol: float = matkit.GAP_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Action-angle coordinates (q_check, p_check) of an RSvD point."""
    s = dualize_r_to_s(st, c, tol)
    return s.q, s.p
