"""
Closed-form convergence conditions for GSOR and spectral bounds for the GSOR
preconditioner, all written in terms of SpectralData (μ_min, μ_max, ν_max).
"""

import logging
import math
from dataclasses import dataclass

from gsorlab.errors import ParameterError
from gsorlab.problem.model import SpectralData
from gsorlab.solvers.options import GsorParams
from gsorlab.theory.roots import strictly_less

logger = logging.getLogger(__name__)

THETA_RANGE = (0.0, 2.0)


def _check_theta(theta):
    if not (THETA_RANGE[0] < theta < THETA_RANGE[1]):
        raise ParameterError(f"theta must lie in (0, 2), got {theta}")


def _check_positive(**values):
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise ParameterError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class ParamBounds:
    """
    Bounds for a fixed θ and τ.

    ``tau_interval_upper`` = 2(2−θ)/(θμ_max) depends on θ alone: any τ below it
    leaves an admissible ω. ``tau_upper(omega)`` is the sharper per-ω bound
    4(ω+θ−ωθ)/(ωθμ_max) that the full condition checks.
    """

    theta: float
    theta_range: tuple[float, float]
    tau_interval_upper: float
    omega_upper: float
    mu_max: float

    def tau_upper(self, omega) -> float:
        return _tau_upper(self.mu_max, omega, self.theta)

    def to_dict(self):
        return {
            "theta_range": list(self.theta_range),
            "tau_interval_upper": self.tau_interval_upper,
            "omega_upper": self.omega_upper,
            "tau_upper_at_omega_upper": self.tau_upper(self.omega_upper),
        }


def gsor_omega_upper(spectral: SpectralData, theta, tau) -> float:
    """4(2−θ) / [(2−θ)(2+τμ_max) + 2θν_max]."""
    return 4.0 * (2.0 - theta) / (
        (2.0 - theta) * (2.0 + tau * spectral.mu_max) + 2.0 * theta * spectral.nu_max
    )


def _tau_upper(mu_max, omega, theta):
    _check_positive(omega=omega, theta=theta)
    return 4.0 * (omega + theta - omega * theta) / (omega * theta * mu_max)


def gsor_tau_upper(spectral: SpectralData, omega, theta) -> float:
    """4(ω+θ−ωθ) / (ωθμ_max)."""
    return _tau_upper(spectral.mu_max, omega, theta)


def gsor_param_bounds(spectral: SpectralData, theta, tau) -> ParamBounds:
    """
    Parameter bounds for a chosen θ and τ.

    Returns:
        ParamBounds: theta_range (0, 2), the θ-only tau_interval_upper, omega_upper
        from gsor_omega_upper and the per-ω tau_upper.
    """
    _check_theta(theta)
    _check_positive(tau=tau)
    return ParamBounds(
        theta=theta,
        theta_range=THETA_RANGE,
        tau_interval_upper=2.0 * (2.0 - theta) / (theta * spectral.mu_max),
        omega_upper=gsor_omega_upper(spectral, theta, tau),
        mu_max=spectral.mu_max,
    )


def satisfies_gsor_bounds(spectral: SpectralData, params: GsorParams, slack=None) -> bool:
    """Full sufficient condition: 0<θ<2, 0<ω<ω_upper(θ,τ), 0<τ<τ_upper(ω,θ)."""
    omega, tau, theta = params.omega, params.tau, params.theta
    if not strictly_less(theta, THETA_RANGE[1], slack):
        return False
    return strictly_less(
        omega, gsor_omega_upper(spectral, theta, tau), slack
    ) and strictly_less(tau, gsor_tau_upper(spectral, omega, theta), slack)


def select_params(spectral: SpectralData, theta) -> GsorParams:
    """
    Midpoint choice: τ = (2−θ)/(θμ_max), then ω = ω_upper(θ, τ)/2.
    """
    _check_theta(theta)
    tau = (2.0 - theta) / (theta * spectral.mu_max)
    omega = 0.5 * gsor_omega_upper(spectral, theta, tau)
    return GsorParams(omega=omega, tau=tau, theta=theta)


def omega1_theta_upper(spectral: SpectralData) -> float:
    return 2.0 / (1.0 + spectral.nu_max)


def omega1_tau_upper(spectral: SpectralData, theta) -> float:
    return 2.0 * (2.0 - theta - theta * spectral.nu_max) / ((2.0 - theta) * spectral.mu_max)


def omega1_conditions(spectral: SpectralData, theta, tau, slack=None) -> bool:
    """Sufficient conditions for GSOR with ω = 1."""
    if theta <= 0 or tau <= 0:
        return False
    if not strictly_less(theta, omega1_theta_upper(spectral), slack):
        return False
    return strictly_less(tau, omega1_tau_upper(spectral, theta), slack)


def uzawa_tau_upper(spectral: SpectralData) -> float:
    return 2.0 * (1.0 - spectral.nu_max) / spectral.mu_max


def uzawa_conditions(spectral: SpectralData, tau, slack=None) -> bool:
    """ω = θ = 1: convergent when ν_max < 1 and 0 < τ < 2(1−ν_max)/μ_max."""
    if tau <= 0 or not strictly_less(spectral.nu_max, 1.0, slack):
        return False
    return strictly_less(tau, uzawa_tau_upper(spectral), slack)


@dataclass(frozen=True)
class SpectralInterval:
    """Enclosure of the non-unit eigenvalues of the GSOR-preconditioned matrix."""

    lambda_lower: float
    lambda_upper: float
    Lambda_low: float
    Lambda_high: float

    def contains(self, value, tol=0.0) -> bool:
        return self.lambda_lower - tol <= value <= self.lambda_upper + tol

    def to_dict(self):
        return {
            "lambda_lower": self.lambda_lower,
            "lambda_upper": self.lambda_upper,
            "Lambda_low": self.Lambda_low,
            "Lambda_high": self.Lambda_high,
        }


def preconditioned_interval(spectral: SpectralData, tau, theta) -> SpectralInterval:
    """
    Λ̲ = θ(1+ν_max) + τμ_min, Λ̄ = θ(1+ν_max) + τμ_max and the interval
    [(Λ̲ − √(Λ̲² − 4τθμ_min))/2, (Λ̄ + √(Λ̄² − 4τθμ_max))/2].
    """
    _check_positive(tau=tau, theta=theta)
    base = theta * (1.0 + spectral.nu_max)
    low = base + tau * spectral.mu_min
    high = base + tau * spectral.mu_max
    # both discriminants are nonnegative in exact arithmetic
    disc_low = max(low * low - 4.0 * tau * theta * spectral.mu_min, 0.0)
    disc_high = max(high * high - 4.0 * tau * theta * spectral.mu_max, 0.0)
    return SpectralInterval(
        # cancellation-free form of (Λ̲ − √disc)/2
        lambda_lower=2.0 * tau * theta * spectral.mu_min / (low + math.sqrt(disc_low)),
        lambda_upper=0.5 * (high + math.sqrt(disc_high)),
        Lambda_low=low,
        Lambda_high=high,
    )


@dataclass(frozen=True)
class ConditionBounds:
    """
    literal: max{upper, upper/lower} over the interval endpoints.
    simplified: (θ/τ)(1+ν)²/μ_min + (τ/θ)μ_max + (1+ν)(1+μ_max/μ_min), never below upper/lower.
    interval_ratio: max(upper, 1)/min(lower, 1), which also covers the unit eigenvalue.
    """

    literal: float
    simplified: float
    interval_ratio: float

    def to_dict(self):
        return {
            "literal": self.literal,
            "simplified": self.simplified,
            "interval_ratio": self.interval_ratio,
        }


def condition_number_bound(spectral: SpectralData, tau, theta) -> ConditionBounds:
    if not spectral.mu_min > 0:
        raise ParameterError("condition bound needs mu_min > 0")
    interval = preconditioned_interval(spectral, tau, theta)
    lower, upper = interval.lambda_lower, interval.lambda_upper
    nu1 = 1.0 + spectral.nu_max
    simplified = (
        (theta / tau) * nu1**2 / spectral.mu_min
        + (tau / theta) * spectral.mu_max
        + nu1 * (1.0 + spectral.mu_max / spectral.mu_min)
    )
    if upper < 1.0:
        logger.warning(
            "Interval upper end %.3e < 1; the literal bound does not cover the unit eigenvalue",
            upper,
        )
    return ConditionBounds(
        literal=max(upper, upper / lower),
        simplified=simplified,
        interval_ratio=max(upper, 1.0) / min(lower, 1.0),
    )
