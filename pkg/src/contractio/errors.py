"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ContractioError(Exception):
    """Base class for every error raised by this package."""


class InvalidShapeError(ContractioError, ValueError):
    """Array dimensions do not match what the operation requires."""


class DomainError(ContractioError, ValueError):
    """A parameter lies outside its admissible range."""


class EmptyEstimateError(ContractioError):
    """Every Monte Carlo sample was skipped, so no estimate exists."""


class QuadratureError(ContractioError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The best value found and the achieved error estimate are kept on the
    exception so callers can decide whether the result is usable.
    """

    def __init__(self, message: str, value: float, abserr: float) -> None:
        super().__init__(f"{message} (value={value!r}, abserr={abserr:.3g})")
        self.value = value
        self.abserr = abserr


class ConfigError(ContractioError):
    """An experiment configuration failed validation."""
