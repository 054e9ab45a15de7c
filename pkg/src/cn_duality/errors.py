"""Exception hierarchy shared by all modules.

The split mirrors how callers need to react: ``DomainError`` and
``InvalidDimensionError`` mean the *input* was bad, ``RegularityViolation``
means a computation ran into a degenerate spectrum (a measure-zero event the
algorithms refuse to continue through), and ``StructureViolation`` means a
matrix failed a structural predicate it was supposed to satisfy -- which for
internally constructed matrices signals a bug, not bad data.
"""


class CnDualityError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDimensionError(CnDualityError):
    """Matrix or vector dimensions are unusable (e.g. n = 0)."""


class DomainError(CnDualityError):
    """A phase-space point violates its open-chamber condition."""


class RegularityViolation(CnDualityError):
    """A spectrum is degenerate or too close to degenerate to trust."""


class StructureViolation(CnDualityError):
    """A matrix fails a structural identity beyond tolerance."""


class NotPositiveDefiniteError(StructureViolation):
    """A matrix expected to be positive definite is not."""


class SingularInputError(CnDualityError):
    """An input matrix is numerically singular."""


class PoleError(CnDualityError):
    """A rational expression is evaluated at (or too close to) a pole."""


class InvalidOrbitVector(CnDualityError):
    """A vector fails the orbit constraints V*V = N, CV + V = 0."""


class IntegrationAborted(CnDualityError):
    """A numerical integration left its domain; carries the last valid time."""

    def __init__(self, message: str, last_time: float):
        super().__init__(message)
        self.last_time = last_time
