"""Typed exceptions shared across the package."""

from __future__ import annotations


class DeltaCasimirError(Exception):
    """Base class for all library errors."""


class DomainError(DeltaCasimirError, ValueError):
    """Argument outside the domain of a function.

    Parameters
    ----------
    message : str
    pole_order : int, optional
        Set when the offending point is a pole of known order.
    """

    def __init__(self, message: str, pole_order: int | None = None):
        super().__init__(message)
        self.pole_order = pole_order


class PoleError(DeltaCasimirError, ArithmeticError):
    """Evaluation hit a pole; ``location`` carries the offending point."""

    def __init__(self, message: str, location: complex | None = None):
        super().__init__(message)
        self.location = location


class ConvergenceError(DeltaCasimirError, RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    ``partial`` holds the best value obtained and ``err_est`` its error estimate.
    """

    def __init__(self, message: str, partial=None, err_est: float | None = None):
        super().__init__(message)
        self.partial = partial
        self.err_est = err_est


class BracketError(DeltaCasimirError, ValueError):
    """Root bracket without a sign change."""


class OrderError(DeltaCasimirError, ArithmeticError):
    """Laurent extraction found a pole of order higher than one."""


class StripError(DomainError):
    """Evaluation point outside the strip of validity."""


class CapabilityError(DeltaCasimirError, NotImplementedError):
    """Requested pipeline is not available for the given geometry."""


class SpectrumError(DeltaCasimirError, ValueError):
    """Operation requires a purely continuous spectrum but a bound state exists."""
