"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SmoothScadError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(SmoothScadError, ValueError):
    """Invalid rule or model parameter (lambda, a, sigma, ...)."""


class DomainError(SmoothScadError, ValueError):
    """Argument outside the domain where a quantity is defined."""


class ShapeError(SmoothScadError, ValueError):
    """Array length or coefficient layout is inconsistent."""


class DepthError(ShapeError):
    """Requested transform depth exceeds log2 of the signal length."""


class UnsupportedFamilyError(SmoothScadError, ValueError):
    """Unknown wavelet filter family."""


class ConfigurationError(SmoothScadError, ValueError):
    """Incomplete or contradictory configuration."""


class NumericalError(SmoothScadError, ArithmeticError):
    """A numerical routine failed to converge."""


class InputFormatError(SmoothScadError, ValueError):
    """Malformed signal file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
