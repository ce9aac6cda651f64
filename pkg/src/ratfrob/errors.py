"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RatFrobError(Exception):
    """Base class for all library errors."""


class UnknownGenerator(RatFrobError, KeyError):
    """A symbol is not a declared generator of the expression."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class PoleHit(RatFrobError, ZeroDivisionError):
    """Exact evaluation landed on a zero of a denominator."""


class DegenerateChartError(RatFrobError):
    """A chart or local expansion is undefined at the requested data."""


class NotMonic(RatFrobError, ValueError):
    """Root extraction was asked for a series whose unit part is not 1 + O(u)."""


class DiscriminantError(RatFrobError):
    """Two poles (or two zeros) coincide."""


class NonIntegrableError(RatFrobError):
    """A tensor handed to an integrator fails mixed-partial symmetry."""


class CertificationFailure(RatFrobError):
    """A polynomiality certificate could not be produced."""


class PrecisionError(RatFrobError, ArithmeticError):
    """A truncated series was asked for a coefficient beyond its order."""


class CheckFailure(RatFrobError):
    """Base for verification failures; carries a JSON-friendly witness."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class WdvvViolation(CheckFailure):
    pass


class HomogeneityViolation(CheckFailure):
    pass


class StructuralMismatch(CheckFailure):
    pass
