"""Eigenvalue utilities: the dense oracle and extremal estimates for symmetric operators."""

import logging
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from gsorlab.config.settings import get_settings
from gsorlab.errors import DimensionMismatchError
from gsorlab.linalg.sparse import check_dense_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenEstimate:
    value: float
    converged: bool
    iterations: int
    method: str


def dense_eigenvalues(m) -> np.ndarray:
    """
    All eigenvalues of a general (nonsymmetric) dense matrix.

    Args:
        m: Square array-like of order at most the dense threshold.

    Returns:
        numpy.ndarray: Complex eigenvalues sorted by real part, then imaginary part.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"eigenvalues need a square matrix, got {m.shape}")
    check_dense_order(m.shape[0], "eigenvalue input")
    values = sla.eigvals(m).astype(np.complex128)
    return values[np.lexsort((values.imag, values.real))]


def spectral_radius(m) -> float:
    return float(np.max(np.abs(dense_eigenvalues(m))))


def _power_iteration(apply, dim, tol, max_iter, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(dim)
    x /= np.linalg.norm(x)
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = apply(x)
        y_norm = np.linalg.norm(y)
        if y_norm == 0.0:
            return 0.0, True, it
        lam = float(x @ y)
        x_new = y / y_norm
        res = np.linalg.norm(apply(x_new) - lam * x_new)
        x = x_new
        if res <= tol * max(abs(lam), 1.0):
            return lam, True, it
    return lam, False, max_iter


def extremal_symmetric_eigenvalue(
    apply: Callable[[np.ndarray], np.ndarray],
    dim: int,
    which: Literal["largest", "smallest"] = "largest",
) -> EigenEstimate:
    """
    Largest or smallest eigenvalue of a symmetric positive semidefinite operator.

    Small operators are materialised column by column and solved exactly;
    larger ones go through ARPACK Lanczos with a fixed start vector, falling
    back to power iteration for the largest eigenvalue.

    Args:
        apply: Callback computing the operator times a vector.
        dim: Operator order.
        which: "largest" or "smallest".

    Returns:
        EigenEstimate: Value plus a convergence flag; never raises on non-convergence.
    """
    if which not in ("largest", "smallest"):
        raise ValueError(f"which must be 'largest' or 'smallest', not {which!r}")
    if dim == 0:
        return EigenEstimate(0.0, True, 0, "empty")

    settings = get_settings()
    if dim <= settings.dense_probe_limit:
        columns = np.column_stack([apply(e) for e in np.eye(dim)])
        values = np.linalg.eigvalsh(0.5 * (columns + columns.T))
        value = values[-1] if which == "largest" else values[0]
        return EigenEstimate(float(value), True, dim, "dense-probe")

    calls = [0]

    def counted(v):
        calls[0] += 1
        return apply(v)

    op = LinearOperator((dim, dim), matvec=counted, dtype=np.float64)
    v0 = np.random.default_rng(0).standard_normal(dim)
    try:
        value = eigsh(
            op,
            k=1,
            which="LA" if which == "largest" else "SA",
            tol=settings.eig_tol,
            maxiter=settings.eig_max_iter,
            v0=v0,
            return_eigenvectors=False,
        )[0]
        return EigenEstimate(float(value), True, calls[0], "lanczos")
    except ArpackNoConvergence as e:
        logger.warning("Lanczos did not converge for the %s eigenvalue", which)
        if len(e.eigenvalues):
            return EigenEstimate(
                float(e.eigenvalues[0]), False, calls[0], "lanczos"
            )

    if which == "largest":
        lam, converged, iters = _power_iteration(
            apply, dim, settings.eig_tol, settings.eig_max_iter
        )
        return EigenEstimate(lam, converged, iters, "power")
    return EigenEstimate(float("nan"), False, settings.eig_max_iter, "lanczos")
