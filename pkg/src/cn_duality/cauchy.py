"""Cauchy matrices, their w-functions, and the identity suite built on them.

The central objects are the matrix with entries 1/(1 + x_k - x_l), the
rational weights

    w_j(x) = prod_{k != j} (1 + x_j - x_k) / (x_j - x_k),

and the family of identities they satisfy: sum_j w_j / (1 + x_j - x_k) = 1,
tr W(x) = N, the closed-form determinant and inverse, and -- for generating
vectors with the block reflection symmetry x_{n+a} = -x_a -- the relations
C W(x) C = W(-x), C Cau(x) C = Cau(-x) and (Cau(x) C W(x))^2 = 1.
``identity_suite`` evaluates all of these and reports residual margins rather
than booleans, so callers can surface how much headroom each identity has.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError, PoleError, StructureViolation
from .matkit import build_c, frob

POLE_TOL = 1e-12


@dataclass(frozen=True)
class CauchyContext:
    """A generating vector x plus the symmetry flag x_{n+a} = -x_a.

    Validated so that every expression downstream is pole-free: the entries
    must be pairwise distinct and 1 + x_k - x_l must never vanish.
    """

    x: np.ndarray
    c_symmetric: bool = False

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.complex128).reshape(-1)
        if x.size == 0:
            raise InvalidDimensionError("generating vector must be non-empty")
        object.__setattr__(self, "x", x)
        diff = x[:, None] - x[None, :]
        if np.any(np.abs(1.0 + diff) < POLE_TOL):
            raise PoleError("1 + x_k - x_l vanishes for some pair")
        if self.c_symmetric:
            if x.size % 2:
                raise InvalidDimensionError("C-symmetric vector needs even length")
            n = x.size // 2
            if not np.array_equal(x[n:], -x[:n]):
                raise StructureViolation("c_symmetric set but x_{n+a} != -x_a")

    @property
    def size(self) -> int:
        return self.x.size

    def require_distinct(self) -> None:
        # The Cauchy matrix itself tolerates repeated entries; the w-functions,
        # the determinant formula and the inverse do not.
        x = self.x
        off = ~np.eye(x.size, dtype=bool)
        diff = x[:, None] - x[None, :]
        if np.any(np.abs(diff[off]) < POLE_TOL):
            raise PoleError("generating vector has (nearly) coincident entries")

    def reflected(self) -> "CauchyContext":
        return CauchyContext(-self.x, self.c_symmetric)


def cauchy_matrix(ctx: CauchyContext) -> np.ndarray:
    """Entries 1 / (1 + x_k - x_l); all-ones diagonal."""
    x = ctx.x
    return 1.0 / (1.0 + x[:, None] - x[None, :])


def w_values(ctx: CauchyContext) -> np.ndarray:
    """The weights w_j(x), computed as direct products in index order."""
    ctx.require_distinct()
    x = ctx.x
    diff = x[:, None] - x[None, :]
    ratio = (1.0 + diff) / np.where(np.eye(x.size, dtype=bool), 1.0, diff)
    np.fill_diagonal(ratio, 1.0)
    return np.prod(ratio, axis=1)


def w_matrix(ctx: CauchyContext) -> np.ndarray:
    return np.diag(w_values(ctx))


def cauchy_det(ctx: CauchyContext) -> complex:
    """Closed-form determinant prod_{k<l} 1 / (1 - (x_k - x_l)^{-2})."""
    ctx.require_distinct()
    x = ctx.x
    out = 1.0 + 0.0j
    for k in range(x.size):
        for l in range(k + 1, x.size):
            d2 = (x[k] - x[l]) ** 2
            if abs(d2 - 1.0) < POLE_TOL:
                raise PoleError("(x_k - x_l)^2 = 1: Cauchy matrix is singular")
            out /= 1.0 - 1.0 / d2
    return complex(out)


def cauchy_inverse(ctx: CauchyContext) -> np.ndarray:
    """Closed-form inverse W(-x) Cau(-x) W(x)."""
    neg = ctx.reflected()
    return w_values(neg)[:, None] * cauchy_matrix(neg) * w_values(ctx)[None, :]


def partial_fraction_sides(alphas, betas, z: complex) -> tuple[complex, complex]:
    """Both sides of the partial-fraction expansion of prod(z-a)/prod(z-b).

    The left side is the rational function itself; the right side is
    delta_{M,N} plus the sum of first-order residues at the beta poles.
    Their agreement is the property callers test.
    """
    alphas = np.asarray(alphas, dtype=np.complex128).reshape(-1)
    betas = np.asarray(betas, dtype=np.complex128).reshape(-1)
    m, nn = alphas.size, betas.size
    if m > nn:
        raise InvalidDimensionError(f"need M <= N, got M={m}, N={nn}")
    bdiff = betas[:, None] - betas[None, :]
    if nn > 1 and np.min(np.abs(bdiff[~np.eye(nn, dtype=bool)])) < POLE_TOL:
        raise PoleError("beta values must be pairwise distinct")
    if np.min(np.abs(z - betas)) < POLE_TOL:
        raise PoleError("z coincides with a beta pole")

    lhs = np.prod(z - alphas) / np.prod(z - betas)
    rhs = 1.0 + 0.0j if m == nn else 0.0 + 0.0j
    for j in range(nn):
        num = np.prod(betas[j] - alphas)
        den = np.prod(np.delete(betas[j] - betas, j))
        rhs += num / (den * (z - betas[j]))
    return complex(lhs), complex(rhs)


def identity_suite(ctx: CauchyContext) -> dict[str, float]:
    """Max residuals of the w-function and reflection identities.

    Generic vectors get the unit-sum and trace identities; the half-pole sums
    and the matrix reflection relations additionally need ``c_symmetric``.
    """
    x = ctx.x
    nn = x.size
    w = w_values(ctx)
    cau = cauchy_matrix(ctx)

    report: dict[str, float] = {}
    # sum_j w_j / (1 + x_j - x_k) = 1 for every k
    sums = (w[None, :] / (1.0 + x[None, :] - x[:, None])).sum(axis=1)
    report["w_sum_unity"] = float(np.max(np.abs(sums - 1.0)))
    report["trace_w"] = float(abs(w.sum() - nn))

    if ctx.c_symmetric:
        half = 1.0 + 2.0 * x
        if np.any(np.abs(half) < POLE_TOL):
            raise PoleError("1 + 2 x_j vanishes")
        report["w_half_pole_sum"] = float(abs(np.sum(w / half)))
        weighted = (w[None, :] / ((1.0 + x[None, :] - x[:, None]) * half[None, :])).sum(axis=1)
        report["w_half_pole_weighted"] = float(np.max(np.abs(weighted + 1.0 / (1.0 - 2.0 * x))))

        c = build_c(nn // 2)
        wm = np.diag(w)
        neg = ctx.reflected()
        report["reflect_w"] = frob(c @ wm @ c - w_matrix(neg))
        report["reflect_cauchy"] = frob(c @ cau @ c - cauchy_matrix(neg))
        fold = cau @ c @ wm
        report["involution"] = frob(fold @ fold - np.eye(nn))
    return report
