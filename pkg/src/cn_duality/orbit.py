"""The coadjoint-orbit ingredient shared by both momentum constraints.

A vector V with V*V = N and C V + V = 0 generates the anti-Hermitian
traceless matrix

    xi(V) = i g (V V* - 1) + i (g - g2) C,

and E (ones in the first block, minus ones in the second) is the reference
vector whose orbit the constraint is pinned to.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidOrbitVector
from .matkit import build_c, frob
from .phase_space import CouplingParams

ORBIT_TOL = 1e-8


def orbit_vector_e(n: int) -> np.ndarray:
    """The reference vector E_a = 1, E_{n+a} = -1."""
    return np.concatenate([np.ones(n), -np.ones(n)]).astype(np.complex128)


def check_orbit_vector(v: np.ndarray, tol: float = ORBIT_TOL) -> None:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    nn = v.size
    if nn % 2 or nn == 0:
        raise InvalidOrbitVector(f"orbit vector must have even length, got {nn}")
    c = build_c(nn // 2)
    norm_defect = abs(float(np.real(v.conj() @ v)) - nn)
    refl_defect = float(np.linalg.norm(c @ v + v))
    if norm_defect > tol:
        raise InvalidOrbitVector(f"|V*V - N| = {norm_defect:.3e} exceeds tol {tol:.1e}")
    if refl_defect > tol:
        raise InvalidOrbitVector(f"||C V + V|| = {refl_defect:.3e} exceeds tol {tol:.1e}")


def xi_of(v, c: CouplingParams, tol: float = ORBIT_TOL) -> np.ndarray:
    """The matrix i g (V V* - 1) + i (g - g2) C; anti-Hermitian and traceless."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    check_orbit_vector(v, tol)
    nn = v.size
    cc = build_c(nn // 2)
    return 1j * c.g * (np.outer(v, v.conj()) - np.eye(nn)) + 1j * (c.g - c.g2) * cc


@dataclass(frozen=True)
class OrbitPoint:
    """An orbit vector together with its xi matrix."""

    v: np.ndarray
    xi: np.ndarray


def orbit_point(v, c: CouplingParams, tol: float = ORBIT_TOL) -> OrbitPoint:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return OrbitPoint(v, xi_of(v, c, tol))


def momentum_residual(y: np.ndarray, big_y: np.ndarray, rho: np.ndarray) -> float:
    """|| (y Y y^{-1})_+ + rho ||_F + || Y_+ ||_F for a candidate level-set point."""
    conj = y @ big_y @ np.linalg.inv(y)
    conj_plus = (conj - conj.conj().T) / 2.0
    y_plus = (big_y - big_y.conj().T) / 2.0
    return frob(conj_plus + rho) + frob(y_plus)
