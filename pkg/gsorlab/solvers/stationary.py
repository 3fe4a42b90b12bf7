"""
Stationary iterations for the double saddle-point system.

GSOR performs three half-steps per sweep, each with one SPD solve:

    x ← x + ω A⁻¹ (f − A x − Bᵀ y − Cᵀ z)
    y ← y + τ P⁻¹ (B x − g)
    z ← z + θ D⁻¹ (C x − D z − h)

The y- and z-updates use the new x. Uzawa is GSOR with ω = θ = 1. GBSOR is
the splitting with M = (1/ω)[A Bᵀ 0; B 0 0; ωC 0 −D], realized with two
A-solves, one Schur complement solve and one D-solve per sweep.
"""

import logging
import time

import numpy as np

from gsorlab.config.settings import get_settings
from gsorlab.errors import ParameterError
from gsorlab.linalg.cholesky import CountingSolver, SolveCounter
from gsorlab.linalg.sparse import spmv
from gsorlab.problem.model import DoubleSaddleProblem, estimate_nu_max
from gsorlab.solvers.options import GsorParams, SolveOptions, SolveReport, SolveStatus

logger = logging.getLogger(__name__)

GBSOR_FRACTIONS = {"GBSORa": 0.25, "GBSORb": 0.5, "GBSORc": 0.75}


class _ResidualMeter:
    """Res = ||b − 𝒜w||₂ / ||b||₂ evaluated blockwise on the symmetric system."""

    def __init__(self, problem: DoubleSaddleProblem):
        self.problem = problem
        b_norm = float(np.linalg.norm(problem.rhs))
        self.relative = b_norm > 0.0
        self.scale = b_norm if self.relative else 1.0
        if not self.relative:
            logger.warning("Right-hand side is zero; Res is the absolute residual")

    def __call__(self, x, y, z):
        pb = self.problem
        rx = pb.f - spmv(pb.A, x) - spmv(pb.B.T, y) - spmv(pb.C.T, z)
        ry = pb.g - spmv(pb.B, x)
        rz = pb.h - spmv(pb.C, x) + spmv(pb.D, z)
        return float(np.sqrt(rx @ rx + ry @ ry + rz @ rz)) / self.scale


def _start(problem, w0):
    if w0 is None:
        return np.zeros(problem.n), np.zeros(problem.m), np.zeros(problem.p)
    return tuple(part.copy() for part in problem.split(w0))


def _iterate(problem, method, sweep, opts, w0, params, factor_time, counter):
    """Runs ``sweep`` until Res <= tol, divergence or max_iter."""
    opts = opts or SolveOptions()
    threshold = get_settings().divergence_threshold
    meter = _ResidualMeter(problem)
    x, y, z = _start(problem, w0)

    res = meter(x, y, z)
    history = [res] if opts.record_history else None
    status = SolveStatus.CONVERGED if res <= opts.tol else SolveStatus.MAX_ITER
    iterations = 0

    logger.info("Starting %s with %s", method, params)
    start = time.perf_counter()
    with np.errstate(over="ignore", invalid="ignore"):
        while status is not SolveStatus.CONVERGED and iterations < opts.max_iter:
            x, y, z = sweep(x, y, z)
            iterations += 1
            res = meter(x, y, z)
            if history is not None:
                history.append(res)
            finite = all(np.all(np.isfinite(v)) for v in (x, y, z))
            if not finite or not np.isfinite(res) or res > threshold:
                status = SolveStatus.DIVERGED
                break
            if res <= opts.tol:
                status = SolveStatus.CONVERGED
    wall_time = time.perf_counter() - start

    report = SolveReport(
        method=method,
        status=status,
        iterations=iterations,
        final_res=res,
        history=history,
        wall_time=wall_time,
        factor_time=factor_time,
        inner_solves=counter.count,
        params=params,
    )
    logger.info(
        "%s finished: status=%s iterations=%d Res=%.3e",
        method,
        status.value,
        iterations,
        res,
    )
    return np.concatenate([x, y, z]), report


def gsor_solve(
    problem: DoubleSaddleProblem,
    params: GsorParams,
    opts: SolveOptions | None = None,
    w0=None,
    method="gsor",
):
    """
    Solves the system with GSOR.

    Args:
        problem: The problem; its A, P, D factors are reused, not recomputed.
        params: The relaxation triple.
        opts (optional): Tolerance, iteration cap and history recording.
        w0 (optional): Initial guess; zero when omitted.
        method (str): Name recorded in the report.

    Returns:
        tuple: (solution, SolveReport).
    """
    counter = SolveCounter()
    a = CountingSolver(problem.factors.a, counter)
    p = CountingSolver(problem.factors.p, counter)
    d = CountingSolver(problem.factors.d, counter)
    A, B, C, D = problem.A, problem.B, problem.C, problem.D
    f, g, h = problem.f, problem.g, problem.h
    omega, tau, theta = params.omega, params.tau, params.theta

    def sweep(x, y, z):
        r = f - spmv(A, x) - spmv(B.T, y) - spmv(C.T, z)
        x = x + omega * a.solve(r)
        y = y + tau * p.solve(spmv(B, x) - g)
        z = z + theta * d.solve(spmv(C, x) - spmv(D, z) - h)
        return x, y, z

    return _iterate(
        problem, method, sweep, opts, w0, params.to_dict(), problem.factors.elapsed, counter
    )


def uzawa_solve(problem: DoubleSaddleProblem, tau: float, opts=None, w0=None):
    """Uzawa-like iteration: GSOR with ω = θ = 1."""
    return gsor_solve(problem, GsorParams(1.0, tau, 1.0), opts, w0, method="uzawa")


def gbsor_omega_upper(nu_max: float) -> float:
    """Upper end s = 2/(1+√ν_max) of the GBSOR convergence interval."""
    if nu_max < 0:
        raise ParameterError(f"nu_max must be nonnegative, got {nu_max}")
    return 2.0 / (1.0 + np.sqrt(nu_max))


def gbsor_default_omega(problem: DoubleSaddleProblem) -> float:
    nu_max, _ = estimate_nu_max(problem.C, problem.factors.a, problem.factors.d)
    return 0.5 * gbsor_omega_upper(nu_max)


def gbsor_solve(problem: DoubleSaddleProblem, omega=None, opts=None, w0=None):
    """
    Solves the system with GBSOR. Each sweep solves

        [A Bᵀ; B 0] (x, y) = (r1, r2)   via t = A⁻¹r1, y = S⁻¹(Bt − r2), x = A⁻¹(r1 − Bᵀy)
        D z = ωCx − r3

    with S = B A⁻¹ Bᵀ factorized densely once.

    Args:
        omega (float, optional): Relaxation; defaults to s/2 with s = 2/(1+√ν_max).

    Returns:
        tuple: (solution, SolveReport).
    """
    if omega is None:
        omega = gbsor_default_omega(problem)
    if not (np.isfinite(omega) and omega > 0):
        raise ParameterError(f"omega must be positive and finite, got {omega}")

    start = time.perf_counter()
    schur = problem.schur_factor
    factor_time = problem.factors.elapsed + (time.perf_counter() - start)

    counter = SolveCounter()
    a = CountingSolver(problem.factors.a, counter)
    s = CountingSolver(schur, counter)
    d = CountingSolver(problem.factors.d, counter)
    A, B, C, D = problem.A, problem.B, problem.C, problem.D
    f, g, h = problem.f, problem.g, problem.h

    def sweep(x, y, z):
        r1 = (1.0 - omega) * (spmv(A, x) + spmv(B.T, y)) - omega * spmv(C.T, z) + omega * f
        r2 = (1.0 - omega) * spmv(B, x) + omega * g
        r3 = -(1.0 - omega) * spmv(D, z) + omega * h
        t = a.solve(r1)
        y = s.solve(spmv(B, t) - r2)
        x = a.solve(r1 - spmv(B.T, y))
        z = d.solve(omega * spmv(C, x) - r3)
        return x, y, z

    return _iterate(
        problem, "gbsor", sweep, opts, w0, {"omega": float(omega)}, factor_time, counter
    )
