"""
SPD factorizations.

Tridiagonal inputs (bandwidth <= 1) go through LAPACK's banded Cholesky;
everything else is densified (desk scale) and factorized with the dense
routine. Both factor types share one interface: ``solve``, the half solves
``solve_lower``/``solve_upper`` with the Cholesky factor L, and ``lower()``.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from gsorlab.config.settings import get_settings
from gsorlab.errors import (
    DimensionMismatchError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)
from gsorlab.linalg.sparse import as_csr, bandwidth, check_dense_order, is_symmetric

logger = logging.getLogger(__name__)


def _check_rhs(order, b):
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != order:
        raise DimensionMismatchError(
            f"factor of order {order} cannot solve a right-hand side of shape {b.shape}"
        )
    return b


def _check_pivots(diag_of_l, max_diag):
    pivots = diag_of_l**2
    floor = get_settings().pivot_tol * max_diag
    if pivots.size and np.min(pivots) <= floor:
        raise NotPositiveDefiniteError(
            f"pivot {np.min(pivots):.3e} below {floor:.3e} (relative to max diagonal)"
        )


@dataclass(frozen=True)
class CholeskyFactor:
    """Dense lower-triangular factor L with L @ L.T equal to the input."""

    factor: np.ndarray

    @property
    def order(self) -> int:
        return self.factor.shape[0]

    def lower(self) -> np.ndarray:
        return self.factor

    def solve(self, b):
        b = _check_rhs(self.order, b)
        return sla.cho_solve((self.factor, True), b, check_finite=False)

    def solve_lower(self, b):
        b = _check_rhs(self.order, b)
        return sla.solve_triangular(self.factor, b, lower=True, check_finite=False)

    def solve_upper(self, b):
        b = _check_rhs(self.order, b)
        return sla.solve_triangular(
            self.factor, b, lower=True, trans="T", check_finite=False
        )


@dataclass(frozen=True)
class TridiagonalFactor:
    """
    Banded factor of an SPD tridiagonal matrix in LAPACK lower band storage:
    row 0 holds diag(L), row 1 holds the subdiagonal of L (last entry unused).
    """

    band: np.ndarray

    @property
    def order(self) -> int:
        return self.band.shape[1]

    def lower(self) -> np.ndarray:
        l_dense = np.diag(self.band[0])
        if self.order > 1:
            l_dense += np.diag(self.band[1, :-1], k=-1)
        return l_dense

    def solve(self, b):
        b = _check_rhs(self.order, b)
        return sla.cho_solve_banded((self.band, True), b, check_finite=False)

    def solve_lower(self, b):
        b = _check_rhs(self.order, b)
        return sla.solve_banded((1, 0), self.band, b, check_finite=False)

    def solve_upper(self, b):
        b = _check_rhs(self.order, b)
        upper = np.vstack(
            [np.concatenate(([0.0], self.band[1, :-1])), self.band[0]]
        )
        return sla.solve_banded((0, 1), upper, b, check_finite=False)


def cholesky_factor(m):
    """
    Factorizes a symmetric positive definite matrix.

    Args:
        m: Square sparse or dense matrix, symmetric within the configured tolerance.

    Returns:
        CholeskyFactor | TridiagonalFactor: TridiagonalFactor when bandwidth <= 1.

    Raises:
        NotSymmetricError: If m fails the symmetry check (it is never symmetrized).
        NotPositiveDefiniteError: If a pivot falls below pivot_tol * max diagonal.
    """
    m = as_csr(m)
    n, cols = m.shape
    if n != cols:
        raise DimensionMismatchError(f"cannot factor a {n}x{cols} matrix")
    if not is_symmetric(m):
        raise NotSymmetricError("input to cholesky_factor is not symmetric")

    diag = m.diagonal()
    max_diag = float(np.max(diag)) if n else 0.0
    if max_diag <= 0.0:
        raise NotPositiveDefiniteError("matrix has no positive diagonal entry")

    if bandwidth(m) <= 1:
        band = np.zeros((2, n))
        band[0] = diag
        if n > 1:
            band[1, :-1] = m.diagonal(-1)
        try:
            factor = sla.cholesky_banded(band, lower=True)
        except np.linalg.LinAlgError as e:
            raise NotPositiveDefiniteError(str(e)) from e
        _check_pivots(factor[0], max_diag)
        logger.debug("Tridiagonal Cholesky of order %d", n)
        return TridiagonalFactor(factor)

    check_dense_order(n, "Cholesky input")
    try:
        factor = sla.cholesky(m.toarray(), lower=True)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(str(e)) from e
    _check_pivots(np.diag(factor), max_diag)
    logger.debug("Dense Cholesky of order %d (nnz %d)", n, m.nnz)
    return CholeskyFactor(factor)


def cholesky_solve(f, b):
    """Returns m^{-1} b for the matrix m that produced factor f."""
    return f.solve(b)


@dataclass
class SolveCounter:
    """Mutable tally of SPD solves; one per solver run."""

    count: int = 0


class CountingSolver:
    def __init__(self, factor, counter: SolveCounter):
        self.factor = factor
        self.counter = counter

    @property
    def order(self):
        return self.factor.order

    def solve(self, b):
        self.counter.count += 1
        return self.factor.solve(b)
