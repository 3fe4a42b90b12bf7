"""
Restarted GMRES with left preconditioning.

The Arnoldi basis is built with modified Gram-Schmidt plus one extra pass when
the new vector keeps a component above 1e-8 along the basis. Convergence is
always decided on the true residual ||b − 𝒜x||₂/||b||₂: the Givens estimate of
the preconditioned residual only decides when to form x and check it.
"""

import logging
import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from gsorlab.errors import DimensionMismatchError, ParameterError
from gsorlab.krylov.preconditioners import apply_preconditioner
from gsorlab.linalg.cholesky import SolveCounter
from gsorlab.problem.model import AssembledOperator
from gsorlab.solvers.options import SolveReport, SolveStatus

logger = logging.getLogger(__name__)

REORTH_TOL = 1e-8
BREAKDOWN_TOL = 1e-14


@dataclass(frozen=True)
class KrylovOptions:
    restart: int = 100
    tol: float = 1e-8
    max_iter: int = 100000
    record_history: bool = False

    def __post_init__(self):
        if self.restart < 1:
            raise ParameterError(f"restart must be at least 1, got {self.restart}")
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be at least 1, got {self.max_iter}")


def as_operator(operator):
    if isinstance(operator, (AssembledOperator, LinearOperator)):
        return operator
    return aslinearoperator(operator)


def _true_residual(op, b, x, b_norm):
    return float(np.linalg.norm(b - op.matvec(x)) / b_norm)


def _givens(a, b):
    if b == 0.0:
        return 1.0, 0.0
    r = np.hypot(a, b)
    return a / r, b / r


def gmres_solve(operator, spec, b, opts: KrylovOptions | None = None, x0=None):
    """
    Solves 𝒜x = b by restarted GMRES on M⁻¹𝒜x = M⁻¹b.

    Args:
        operator: AssembledOperator, LinearOperator, sparse or dense matrix.
        spec (PreconditionerSpec | None): Left preconditioner M; None means identity.
        b: Right-hand side.
        opts (optional): Restart length, tolerance, iteration cap.
        x0 (optional): Initial guess; zero when omitted.

    Returns:
        tuple: (solution, SolveReport). ``iterations`` counts Arnoldi steps;
        ``history`` holds the relative preconditioned residual estimates.
    """
    opts = opts or KrylovOptions()
    op = as_operator(operator)
    b = np.asarray(b, dtype=np.float64)
    order = op.shape[0]
    if op.shape[0] != op.shape[1] or b.shape != (order,):
        raise DimensionMismatchError(f"operator {op.shape} and rhs {b.shape} do not match")

    counter = SolveCounter()

    def precond(v):
        return v if spec is None else apply_preconditioner(spec, v, counter)

    params = {"restart": opts.restart}
    if spec is not None:
        params.update(spec.to_dict())

    x = np.zeros(order) if x0 is None else np.array(x0, dtype=np.float64)
    b_norm = float(np.linalg.norm(b))
    start = time.perf_counter()
    if b_norm == 0.0:
        history = [0.0] if opts.record_history else None
        report = SolveReport("gmres", SolveStatus.CONVERGED, 0, 0.0, history, params=params)
        return np.zeros(order), report

    pb_norm = float(np.linalg.norm(precond(b))) or 1.0
    history = [] if opts.record_history else None
    res = _true_residual(op, b, x, b_norm)
    status = SolveStatus.CONVERGED if res <= opts.tol else SolveStatus.MAX_ITER
    total = 0

    while status is not SolveStatus.CONVERGED and total < opts.max_iter:
        r = precond(b - op.matvec(x))
        beta = float(np.linalg.norm(r))
        if beta == 0.0:
            break
        k = opts.restart
        V = np.zeros((k + 1, order))
        H = np.zeros((k + 1, k))
        cs, sn = np.zeros(k), np.zeros(k)
        g = np.zeros(k + 1)
        V[0] = r / beta
        g[0] = beta
        used = 0

        for j in range(k):
            if total >= opts.max_iter:
                break
            w = precond(op.matvec(V[j]))
            w_norm0 = float(np.linalg.norm(w))
            for i in range(j + 1):
                H[i, j] = V[i] @ w
                w -= H[i, j] * V[i]
            w_norm = float(np.linalg.norm(w))
            if w_norm > 0 and np.max(np.abs(V[: j + 1] @ w)) > REORTH_TOL * w_norm:
                for i in range(j + 1):
                    c = V[i] @ w
                    H[i, j] += c
                    w -= c * V[i]
                w_norm = float(np.linalg.norm(w))
            H[j + 1, j] = w_norm
            total += 1
            used = j + 1

            for i in range(j):
                h_i, h_next = H[i, j], H[i + 1, j]
                H[i, j] = cs[i] * h_i + sn[i] * h_next
                H[i + 1, j] = -sn[i] * h_i + cs[i] * h_next
            cs[j], sn[j] = _givens(H[j, j], H[j + 1, j])
            H[j, j] = cs[j] * H[j, j] + sn[j] * H[j + 1, j]
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]

            estimate = abs(g[j + 1]) / pb_norm
            if history is not None:
                history.append(estimate)
            breakdown = w_norm <= BREAKDOWN_TOL * max(w_norm0, 1.0)
            if estimate <= opts.tol or breakdown:
                break
            V[j + 1] = w / w_norm

        if used:
            y = sla.solve_triangular(H[:used, :used], g[:used], check_finite=False)
            x = x + V[:used].T @ y
        res = _true_residual(op, b, x, b_norm)
        logger.debug(
            "GMRES cycle ended after %d steps (total %d), true Res %.3e", used, total, res
        )
        if res <= opts.tol:
            status = SolveStatus.CONVERGED
        elif used == 0:
            break

    wall_time = time.perf_counter() - start
    report = SolveReport(
        method="gmres",
        status=status,
        iterations=total,
        final_res=res,
        history=history,
        wall_time=wall_time,
        factor_time=spec.problem.factors.elapsed if spec is not None else 0.0,
        inner_solves=counter.count,
        params=params,
    )
    logger.info("gmres finished: status=%s iterations=%d Res=%.3e", status.value, total, res)
    return x, report
