"""Exception types shared across the package."""

from __future__ import annotations


class HolofrftError(Exception):
    """Base class for all package-specific errors."""


class DegenerateCoordinateError(HolofrftError):
    """A holomorphic coordinate or gauge factor was requested where it degenerates.

    The w coordinate collapses onto a real axis at t = 0 and t = pi/2, the z
    coordinate at s = 0, and the Gaussian gauge weight has no finite value at
    t = pi/2 (s infinite).
    """


class IntegrationDomainError(HolofrftError, ValueError):
    """An integrand evaluated to a non-finite value at a quadrature node.

    The message names the offending node; the usual cause is a signal or
    weight that blows up inside the integration window.
    """


class SupportError(HolofrftError):
    """A quadrature rule or grid cannot support the requested computation.

    Raised when the integrand still carries significant mass at the edge of
    the rule or grid, when an oscillation exceeds the rule's bandwidth, or
    when a sampled signal is too coarse for the requested basis order. The
    optional ``suggestion`` carries a corrective parameter (larger order,
    larger extent) when one is known.
    """

    def __init__(self, message: str, suggestion: float | int | None = None):
        super().__init__(message)
        self.suggestion = suggestion
