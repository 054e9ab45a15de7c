"""Dense complex linear algebra specialized to the block-swap symmetry C.

Every matrix handled here is N x N with N = 2n, and the structure constant is
the involution C that swaps the two n-blocks.  The module provides the paired
eigendecompositions used everywhere downstream: Hermitian matrices that
*anticommute* with C have spectrum {+d_a, -d_a}, and positive definite
matrices A with A C A = C have spectrum {e^{+2q_a}, e^{-2q_a}}.  In both cases
the eigenvector frame can be chosen unitary and *commuting* with C, and the
pairing column n+a = C v_a makes that exact by construction.

Degenerate or near-degenerate spectra are errors here, never silent
fallbacks: the downstream parametrizations are only valid on the open chamber
where all pair gaps are positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    InvalidDimensionError,
    NotPositiveDefiniteError,
    RegularityViolation,
    SingularInputError,
    StructureViolation,
)

# Default tolerances: structure predicates are checked at spectral accuracy,
# chamber-regularity gaps more loosely (conditioning degrades near walls).
STRUCTURE_TOL = 1e-8
GAP_TOL = 1e-6
KFRAME_TOL = 1e-10


def build_c(n: int) -> np.ndarray:
    """The 2n x 2n block anti-diagonal identity [[0, 1], [1, 0]]."""
    if n < 1:
        raise InvalidDimensionError(f"block size must be >= 1, got n={n}")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [eye, zero]]).astype(np.complex128)


def _as_square(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {x.shape}")
    if x.shape[0] % 2 or x.shape[0] == 0:
        raise InvalidDimensionError(f"expected even dimension N = 2n, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise InvalidDimensionError("matrix has non-finite entries")
    return x


def frob(x) -> float:
    return float(np.linalg.norm(x))


def decompose_kp(y) -> tuple[np.ndarray, np.ndarray]:
    """Split Y into (anti-Hermitian, Hermitian) parts, Y = Y_plus + Y_minus."""
    y = _as_square(y)
    yh = y.conj().T
    return (y - yh) / 2.0, (y + yh) / 2.0


@dataclass(frozen=True)
class KFrame:
    """A unitary N x N matrix commuting with C.

    Validated on construction: both defects must be below ``KFRAME_TOL`` in
    Frobenius norm.
    """

    mat: np.ndarray

    def __post_init__(self):
        mat = _as_square(self.mat)
        object.__setattr__(self, "mat", mat)
        n = mat.shape[0] // 2
        c = build_c(n)
        if frob(mat.conj().T @ mat - np.eye(2 * n)) > KFRAME_TOL:
            raise StructureViolation("frame is not unitary")
        if frob(mat @ c - c @ mat) > KFRAME_TOL:
            raise StructureViolation("frame does not commute with C")

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2


@dataclass(frozen=True)
class PairedSpectrum:
    """Positive half of a C-paired spectrum plus the diagonalizing frame."""

    positive_part: np.ndarray
    frame: KFrame


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # Deterministic gauge: make the largest-magnitude component real positive.
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def _check_gaps(values: np.ndarray, tol: float, what: str) -> None:
    if values[-1] <= tol:
        raise RegularityViolation(
            f"{what}: smallest paired value {values[-1]:.3e} is within tol={tol:.1e} of zero"
        )
    if values.size > 1:
        gap = float(np.min(values[:-1] - values[1:]))
        if gap <= tol:
            raise RegularityViolation(
                f"{what}: smallest pair gap {gap:.3e} is within tol={tol:.1e}"
            )


def eig_paired_p(x, tol: float = GAP_TOL, structure_tol: float = STRUCTURE_TOL) -> PairedSpectrum:
    """Diagonalize a Hermitian matrix anticommuting with C.

    Returns d_1 > ... > d_n > 0 and a frame eta in K with
    X = eta diag(d, -d) eta*.  The negative-eigenvalue columns are C v_a,
    which X C = -C X forces to be exact eigenvectors for -d_a.
    """
    x = _as_square(x)
    n = x.shape[0] // 2
    c = build_c(n)
    scale = max(1.0, frob(x))
    if frob(x - x.conj().T) > structure_tol * scale:
        raise StructureViolation("matrix is not Hermitian")
    if frob(x @ c + c @ x) > structure_tol * scale:
        raise StructureViolation("matrix does not anticommute with C")

    vals, vecs = np.linalg.eigh((x + x.conj().T) / 2.0)
    d = vals[n:][::-1].copy()  # descending positive part
    _check_gaps(d, tol, "paired spectrum")

    frame = np.empty((2 * n, 2 * n), dtype=np.complex128)
    for a in range(n):
        v = _fix_phase(vecs[:, 2 * n - 1 - a])
        frame[:, a] = v
        frame[:, n + a] = c @ v

    recon = (frame * np.concatenate([d, -d])) @ frame.conj().T
    if frob(recon - x) > 1e-9 * scale:
        raise StructureViolation("paired eigendecomposition failed to reconstruct input")
    return PairedSpectrum(d, KFrame(frame))


def eig_paired_expp(a, tol: float = GAP_TOL, structure_tol: float = STRUCTURE_TOL) -> PairedSpectrum:
    """Diagonalize a positive definite matrix with A C A = C.

    The spectrum comes in reciprocal pairs e^{+-2q}; returns
    q_1 > ... > q_n > 0 and eta in K with A = eta diag(e^{2q}, e^{-2q}) eta*.
    The pairing uses A (C u) = e^{-2q} (C u), which A C A = C forces.
    """
    a = _as_square(a)
    n = a.shape[0] // 2
    c = build_c(n)
    scale = max(1.0, frob(a))
    if frob(a - a.conj().T) > structure_tol * scale:
        raise StructureViolation("matrix is not Hermitian")

    vals, vecs = np.linalg.eigh((a + a.conj().T) / 2.0)
    if vals[0] <= 0.0:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite (min eigenvalue {vals[0]:.3e}); not in exp(p)"
        )
    # Reciprocal pairing mu_i * mu_{N+1-i} = 1 is the spectral form of ACA = C.
    pair_defect = float(np.max(np.abs(vals * vals[::-1] - 1.0)))
    if pair_defect > structure_tol * max(1.0, float(vals[-1])):
        raise StructureViolation(
            f"spectrum is not reciprocally paired (defect {pair_defect:.3e}); A C A != C"
        )

    q = 0.5 * np.log(vals[n:][::-1].copy())
    _check_gaps(q, tol, "exp-paired spectrum")

    frame = np.empty((2 * n, 2 * n), dtype=np.complex128)
    for b in range(n):
        u = _fix_phase(vecs[:, 2 * n - 1 - b])
        frame[:, b] = u
        frame[:, n + b] = c @ u

    recon = (frame * np.exp(np.concatenate([2 * q, -2 * q]))) @ frame.conj().T
    if frob(recon - a) > 1e-9 * scale:
        raise StructureViolation("exp-paired eigendecomposition failed to reconstruct input")
    return PairedSpectrum(q, KFrame(frame))


def sqrt_posdef(a) -> np.ndarray:
    """Unique Hermitian positive definite square root."""
    a = np.asarray(a, dtype=np.complex128)
    scale = max(1.0, frob(a))
    if frob(a - a.conj().T) > STRUCTURE_TOL * scale:
        raise StructureViolation("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh((a + a.conj().T) / 2.0)
    if vals[0] <= 0.0:
        raise NotPositiveDefiniteError(f"min eigenvalue {vals[0]:.3e} <= 0")
    r = (vecs * np.sqrt(vals)) @ vecs.conj().T
    return (r + r.conj().T) / 2.0


def expm(x) -> np.ndarray:
    """Matrix exponential; spectral for Hermitian input, Pade otherwise."""
    x = np.asarray(x, dtype=np.complex128)
    if frob(x - x.conj().T) <= 1e-12 * max(1.0, frob(x)):
        vals, vecs = np.linalg.eigh((x + x.conj().T) / 2.0)
        e = (vecs * np.exp(vals)) @ vecs.conj().T
        return (e + e.conj().T) / 2.0
    return scipy.linalg.expm(x)


def cartan_polar(b, tol: float = STRUCTURE_TOL) -> tuple[np.ndarray, KFrame]:
    """Polar factorization B = pos * uni with pos in exp(p) and uni in K.

    Requires B invertible and in the group (B* C B = C within tol).
    """
    b = _as_square(b)
    n = b.shape[0] // 2
    c = build_c(n)
    sv = np.linalg.svd(b, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        raise SingularInputError("matrix is numerically singular")
    if frob(b.conj().T @ c @ b - c) > tol * max(1.0, frob(b) ** 2):
        raise StructureViolation("matrix does not satisfy B* C B = C")
    pos = sqrt_posdef(b @ b.conj().T)
    uni = np.linalg.solve(pos, b)
    return pos, KFrame(uni)
