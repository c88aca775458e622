"""Exception types shared across the package."""


class MinlamError(Exception):
    """Base class for all package errors."""


class ValidationError(MinlamError):
    """A constructor argument or configuration violates a documented constraint."""


class DomainError(MinlamError):
    """A point (or an integration path) leaves the domain of definition."""


class QuadratureError(MinlamError):
    """Adaptive quadrature could not reach the requested tolerance.

    The achieved error estimate is attached so callers can decide whether
    to accept the result anyway.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class GridError(MinlamError):
    """A sampling grid request is infeasible (e.g. too many points)."""
