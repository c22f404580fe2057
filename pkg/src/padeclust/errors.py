"""Exception types shared across the package.

Domain errors map to CLI exit code 2; a broken run-level invariant maps to
exit code 3 (see cli.py).
"""

from __future__ import annotations


class PadeclustError(Exception):
    """Base class for all domain errors raised by this package."""


class DegenerateInput(PadeclustError):
    """The input object is outside the operation's domain (e.g. zero polynomial)."""


class NonConvergence(PadeclustError):
    """Iteration budget exhausted with the residual still above tolerance.

    Carries the partial result so the caller can inspect it and decide to
    retry with a perturbed start or higher precision.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class InsufficientCoefficients(PadeclustError):
    """Fewer series coefficients than the requested (m, n) window needs."""


class DegenerateSystem(PadeclustError):
    """The denominator system is singular or numerically beyond the condition cap."""


class EndCoefficientZero(PadeclustError):
    """A ratio that divides by an end coefficient received a polynomial whose
    lowest or highest coefficient is (numerically) zero."""


class IndexOutOfRange(PadeclustError):
    """An order-statistic index exceeds the number of available roots."""


class MissingData(PadeclustError):
    """A run directory lacks the files a command needs."""


class InvariantViolation(PadeclustError):
    """A deterministic inequality failed on a non-degenerate trial."""
