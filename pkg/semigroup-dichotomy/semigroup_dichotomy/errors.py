"""Exceptions raised by the numerical modules."""

from typing import Any


class NumericsError(Exception):
    """Raised when a numerical routine cannot produce a trustworthy value."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class SpectrumError(NumericsError):
    """Raised when a resolvent is requested at or too near the spectrum."""


class ConvergenceError(NumericsError):
    """Raised when an iteration exhausts its cap; `iterate` holds the last iterate."""

    def __init__(self, message: str, iterate: Any = None):
        super().__init__(message)
        self.iterate = iterate


class QuadratureError(NumericsError):
    """Raised when the quadrature error estimate is too large for the requested check."""

    def __init__(self, message: str, suggested_points: int | None = None):
        super().__init__(message)
        self.suggested_points = suggested_points


class FormatError(Exception):
    """Raised when an input document is malformed or fails its schema."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class Cancelled(NumericsError):
    """Raised inside a worker thread once the command that started it has timed out."""
