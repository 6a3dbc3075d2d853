"""Exception hierarchy for the Jacobi-Weierstrass computations."""

from typing import Any


class JacobiWeierstrassError(Exception):
    """Base class for every error raised by the package."""


class DomainError(JacobiWeierstrassError, ValueError):
    """An input lies outside the domain of an operation."""


class PrecisionError(JacobiWeierstrassError, ArithmeticError):
    """The working precision is not sufficient for the requested result."""


class PoleError(JacobiWeierstrassError):
    """Evaluation hit a lattice point, i.e. the theta divisor.

    Args:
        message: Human readable description.
        component: Index of the offending vector component, if any.
        point: The argument that landed on (or next to) the lattice.
    """

    def __init__(
        self, message: str, component: int | None = None, point: Any = None
    ) -> None:
        super().__init__(message)
        self.component = component
        self.point = point


class LatticeRecoveryError(JacobiWeierstrassError):
    """Period values do not span a discrete rank-2 group within tolerance."""


class FormDataError(JacobiWeierstrassError, ValueError):
    """Cusp-form coefficient input could not be parsed."""


__all__ = [
    "JacobiWeierstrassError",
    "DomainError",
    "PrecisionError",
    "PoleError",
    "LatticeRecoveryError",
    "FormDataError",
]
