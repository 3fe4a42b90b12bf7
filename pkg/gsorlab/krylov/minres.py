"""
Preconditioned MINRES (Paige-Saunders recurrence) for the symmetric layout
with an SPD block-diagonal preconditioner.
"""

import logging
import time

import numpy as np

from gsorlab.errors import DimensionMismatchError, ParameterError
from gsorlab.krylov.gmres import KrylovOptions, as_operator
from gsorlab.krylov.preconditioners import PreconditionerKind, apply_preconditioner
from gsorlab.linalg.cholesky import SolveCounter
from gsorlab.problem.model import AssembledOperator
from gsorlab.solvers.options import SolveReport, SolveStatus

logger = logging.getLogger(__name__)


def _check_inputs(operator, spec):
    if spec is not None and spec.kind is not PreconditionerKind.BLOCK_DIAGONAL:
        raise ParameterError(
            f"MINRES needs an SPD preconditioner; {spec.kind.value} is not one"
        )
    if isinstance(operator, AssembledOperator) and operator.layout != "symmetric":
        raise ParameterError("MINRES needs the symmetric layout")


def minres_solve(operator, spec, b, opts: KrylovOptions | None = None, x0=None):
    """
    Solves the symmetric system with preconditioned MINRES.

    Args:
        operator: Symmetric operator (AssembledOperator in the symmetric layout, matrix or LinearOperator).
        spec (PreconditionerSpec | None): Block-diagonal preconditioner, or None for none.
        b: Right-hand side.
        opts (optional): KrylovOptions; restart is ignored.

    Returns:
        tuple: (solution, SolveReport) with the true relative residual as final_res.
    """
    _check_inputs(operator, spec)
    opts = opts or KrylovOptions()
    op = as_operator(operator)
    b = np.asarray(b, dtype=np.float64)
    order = op.shape[0]
    if op.shape[0] != op.shape[1] or b.shape != (order,):
        raise DimensionMismatchError(f"operator {op.shape} and rhs {b.shape} do not match")

    counter = SolveCounter()

    def precond(v):
        return v if spec is None else apply_preconditioner(spec, v, counter)

    params = {} if spec is None else spec.to_dict()
    start = time.perf_counter()
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        history = [0.0] if opts.record_history else None
        return np.zeros(order), SolveReport(
            "minres", SolveStatus.CONVERGED, 0, 0.0, history, params=params
        )

    x = np.zeros(order) if x0 is None else np.array(x0, dtype=np.float64)
    r1 = b - op.matvec(x)
    res = float(np.linalg.norm(r1)) / b_norm
    history = [res] if opts.record_history else None
    status = SolveStatus.CONVERGED if res <= opts.tol else SolveStatus.MAX_ITER
    itn = 0

    y = precond(r1)
    beta1_sq = float(r1 @ y)
    if beta1_sq < 0:
        raise ParameterError("preconditioner is not positive definite")
    beta1 = np.sqrt(beta1_sq)

    oldb, beta, dbar, epsln, phibar = 0.0, beta1, 0.0, 0.0, beta1
    cs, sn = -1.0, 0.0
    w = np.zeros(order)
    w2 = np.zeros(order)
    r2 = r1
    eps = np.finfo(float).eps

    while status is not SolveStatus.CONVERGED and itn < opts.max_iter and beta > 0:
        itn += 1
        v = y / beta
        y = op.matvec(v)
        if itn >= 2:
            y = y - (beta / oldb) * r1
        alfa = float(v @ y)
        y = y - (alfa / beta) * r2
        r1, r2 = r2, y
        y = precond(r2)
        oldb = beta
        beta_sq = float(r2 @ y)
        if beta_sq < 0:
            if beta_sq < -1e-12 * beta1_sq:
                raise ParameterError("preconditioner is not positive definite")
            beta_sq = 0.0
        beta = np.sqrt(beta_sq)

        oldeps = epsln
        delta = cs * dbar + sn * alfa
        gbar = sn * dbar - cs * alfa
        epsln = sn * beta
        dbar = -cs * beta
        gamma = max(np.hypot(gbar, beta), eps)
        cs, sn = gbar / gamma, beta / gamma
        phi = cs * phibar
        phibar = sn * phibar

        w1, w2 = w2, w
        w = (v - oldeps * w1 - delta * w2) / gamma
        x = x + phi * w

        estimate = abs(phibar) / beta1
        if history is not None:
            history.append(estimate)
        if estimate <= opts.tol or beta <= eps * beta1:
            res = float(np.linalg.norm(b - op.matvec(x))) / b_norm
            if res <= opts.tol:
                status = SolveStatus.CONVERGED

    if status is not SolveStatus.CONVERGED:
        res = float(np.linalg.norm(b - op.matvec(x))) / b_norm
    wall_time = time.perf_counter() - start
    report = SolveReport(
        method="minres",
        status=status,
        iterations=itn,
        final_res=res,
        history=history,
        wall_time=wall_time,
        factor_time=spec.problem.factors.elapsed if spec is not None else 0.0,
        inner_solves=counter.count,
        params=params,
    )
    logger.info("minres finished: status=%s iterations=%d Res=%.3e", status.value, itn, res)
    return x, report
