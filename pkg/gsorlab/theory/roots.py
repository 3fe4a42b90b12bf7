"""
Coefficient tests for all roots of a real monic quadratic or cubic to lie in
the open unit disk. Strict inequalities are applied as a < b − slack, with the
slack taken from settings (boundary_slack) unless given.
"""

import math
from dataclasses import dataclass

import numpy as np

from gsorlab.config.settings import get_settings
from gsorlab.errors import ParameterError


def strictly_less(a, b, slack=None) -> bool:
    slack = get_settings().boundary_slack if slack is None else slack
    return a < b - slack


def _check_finite(coeffs):
    if not all(math.isfinite(c) for c in coeffs):
        raise ParameterError(f"coefficients must be finite, got {coeffs}")


@dataclass(frozen=True)
class QuadraticCoeffs:
    """λ² + a1 λ + a0."""

    a1: float
    a0: float

    def __post_init__(self):
        _check_finite((self.a1, self.a0))

    def roots(self):
        return np.roots([1.0, self.a1, self.a0])


@dataclass(frozen=True)
class CubicCoeffs:
    """λ³ + a2 λ² + a1 λ + a0."""

    a2: float
    a1: float
    a0: float

    def __post_init__(self):
        _check_finite((self.a2, self.a1, self.a0))

    def roots(self):
        return np.roots([1.0, self.a2, self.a1, self.a0])


def quadratic_schur_test(c: QuadraticCoeffs, slack=None) -> bool:
    """True iff |a1| < 1 + a0 < 2."""
    return strictly_less(abs(c.a1), 1.0 + c.a0, slack) and strictly_less(
        1.0 + c.a0, 2.0, slack
    )


def cubic_schur_test(c: CubicCoeffs, slack=None) -> bool:
    """
    True iff |a2 + a0| < 1 + a1, |a2 − 3a0| < 3 − a1 and a0² + a1 − a0·a2 < 1.
    """
    a2, a1, a0 = c.a2, c.a1, c.a0
    return (
        strictly_less(abs(a2 + a0), 1.0 + a1, slack)
        and strictly_less(abs(a2 - 3.0 * a0), 3.0 - a1, slack)
        and strictly_less(a0 * a0 + a1 - a0 * a2, 1.0, slack)
    )
