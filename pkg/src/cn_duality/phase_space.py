"""Phase-space points and coupling constants for the two models.

Both models live over the open Weyl chamber: Sutherland positions and RSvD
"positions" alike must satisfy v_1 > v_2 > ... > v_n > 0 with a configurable
margin.  Near-wall states are rejected up front instead of letting 1/sinh
terms blow up silently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

CHAMBER_MARGIN = 1e-10


@dataclass(frozen=True)
class CouplingParams:
    """Coupling constants g, g2 (both non-zero) and the derived eps."""

    g: float
    g2: float

    def __post_init__(self):
        if self.g == 0.0 or self.g2 == 0.0:
            raise DomainError("coupling constants g and g2 must be non-zero")
        if abs(self.g2 - 2.0 * self.g) <= 1e-12 * max(1.0, abs(self.g)):
            warnings.warn(
                "g2 = 2*g: the chamber-regularity argument needs g2 != 2*g; "
                "results at this coupling are not guaranteed",
                RuntimeWarning,
                stacklevel=2,
            )

    @property
    def eps(self) -> float:
        return 1.0 - self.g2 / self.g


def check_chamber(values: np.ndarray, margin: float, label: str) -> None:
    """Require values strictly decreasing and strictly positive with margin."""
    if values.ndim != 1 or values.size == 0:
        raise DomainError(f"{label} must be a non-empty 1-d array")
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{label} has non-finite entries")
    if values[-1] <= margin:
        raise DomainError(
            f"{label} must stay positive: smallest entry {values[-1]:.3e} <= margin {margin:.1e}"
        )
    if values.size > 1 and np.min(values[:-1] - values[1:]) <= margin:
        raise DomainError(f"{label} must be strictly decreasing with margin {margin:.1e}")


@dataclass(frozen=True)
class SutherlandState:
    """Positions q (open chamber) and momenta p."""

    q: np.ndarray
    p: np.ndarray
    margin: float = field(default=CHAMBER_MARGIN, repr=False, compare=False)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=np.float64).reshape(-1)
        p = np.asarray(self.p, dtype=np.float64).reshape(-1)
        if q.size != p.size:
            raise DomainError(f"q and p must have the same length, got {q.size} and {p.size}")
        if not np.all(np.isfinite(p)):
            raise DomainError("p has non-finite entries")
        check_chamber(q, self.margin, "q")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.q.size


@dataclass(frozen=True)
class RsvdState:
    """Positions lam (open chamber) and rapidity-like momenta theta."""

    lam: np.ndarray
    theta: np.ndarray
    margin: float = field(default=CHAMBER_MARGIN, repr=False, compare=False)

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=np.float64).reshape(-1)
        theta = np.asarray(self.theta, dtype=np.float64).reshape(-1)
        if lam.size != theta.size:
            raise DomainError(
                f"lam and theta must have the same length, got {lam.size} and {theta.size}"
            )
        if not np.all(np.isfinite(theta)):
            raise DomainError("theta has non-finite entries")
        check_chamber(lam, self.margin, "lam")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "theta", theta)

    @property
    def n(self) -> int:
        return self.lam.size
