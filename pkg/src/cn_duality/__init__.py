"""Exact solvers and duality map for a pair of integrable many-body models.

The package implements the hyperbolic Sutherland model and the rational
Ruijsenaars-Schneider-van Diejen model on the open chamber
v_1 > ... > v_n > 0, the canonical map identifying one model's action
variables with the other's positions, and spectral solution algorithms for
both flows, together with an independent RK4/finite-difference oracle and a
verification suite that turns every structural identity into a residual
check.
"""

from .duality import dualize_r_to_s, dualize_s_to_r, pullback_coords, pullback_coords_r
from .errors import (
    CnDualityError,
    DomainError,
    IntegrationAborted,
    InvalidDimensionError,
    InvalidOrbitVector,
    NotPositiveDefiniteError,
    PoleError,
    RegularityViolation,
    SingularInputError,
    StructureViolation,
)
from .orbit import OrbitPoint, orbit_point, orbit_vector_e, xi_of
from .phase_space import CouplingParams, RsvdState, SutherlandState
from .rsvd import (
    RsvdLaxBundle,
    grad_f1,
    hamiltonian_r,
    lax_a,
    momentum_residual_r,
    reduced_observables,
    solve_flow_r,
    z_values,
)
from .sutherland import (
    action_variables,
    hamiltonian_s,
    lax_l,
    momentum_residual_s,
    solve_flow_s,
)

__version__ = "0.1.0"

__all__ = [
    "CnDualityError",
    "CouplingParams",
    "DomainError",
    "IntegrationAborted",
    "InvalidDimensionError",
    "InvalidOrbitVector",
    "NotPositiveDefiniteError",
    "OrbitPoint",
    "PoleError",
    "RegularityViolation",
    "RsvdLaxBundle",
    "RsvdState",
    "SingularInputError",
    "StructureViolation",
    "SutherlandState",
    "action_variables",
    "dualize_r_to_s",
    "dualize_s_to_r",
    "grad_f1",
    "hamiltonian_r",
    "hamiltonian_s",
    "lax_a",
    "lax_l",
    "momentum_residual_r",
    "momentum_residual_s",
    "orbit_point",
    "orbit_vector_e",
    "pullback_coords",
    "pullback_coords_r",
    "reduced_observables",
    "solve_flow_r",
    "solve_flow_s",
    "xi_of",
    "z_values",
]
