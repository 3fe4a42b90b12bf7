"""
Sparse and dense matrix kernels.

``SparseMatrix`` is a canonical ``scipy.sparse.csr_matrix``: sorted column
indices, no duplicates and no explicitly stored zeros. ``DenseMatrix`` is a
2-D ``numpy.ndarray``.
"""

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import norm as sparse_norm

from gsorlab.config.settings import get_settings
from gsorlab.errors import DenseThresholdError, DimensionMismatchError

SparseMatrix = sp.csr_matrix
DenseMatrix = np.ndarray


def as_csr(matrix) -> sp.csr_matrix:
    """
    Converts any sparse, dense or nested-list matrix to canonical CSR.

    Args:
        matrix: A scipy sparse matrix/array, numpy array or nested list.

    Returns:
        scipy.sparse.csr_matrix: Float64 CSR with sorted indices and no stored zeros.
    """
    if sp.issparse(matrix):
        csr = sp.csr_matrix(matrix, dtype=np.float64, copy=True)
    else:
        dense = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        csr = sp.csr_matrix(dense)
    csr.sum_duplicates()
    csr.eliminate_zeros()
    csr.sort_indices()
    return csr


def identity(n: int) -> sp.csr_matrix:
    return as_csr(sp.identity(n, format="csr"))


def spmv(m, x) -> np.ndarray:
    """
    Sparse matrix-vector product.

    Args:
        m: Sparse (or dense) matrix of shape (rows, cols).
        x: Vector of length cols.

    Returns:
        numpy.ndarray: The product m @ x.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != m.shape[1]:
        raise DimensionMismatchError(
            f"spmv: matrix has {m.shape[1]} columns, vector has shape {x.shape}"
        )
    return np.asarray(m @ x, dtype=np.float64).ravel()


def bandwidth(m) -> int:
    """Largest |i - j| over the stored entries of m."""
    coo = sp.coo_matrix(m)
    if coo.nnz == 0:
        return 0
    return int(np.max(np.abs(coo.row - coo.col)))


def frobenius_norm(m) -> float:
    if sp.issparse(m):
        return float(sparse_norm(m, "fro"))
    return float(np.linalg.norm(m, "fro"))


def is_symmetric(m, rtol=None) -> bool:
    """
    True when ||m - m^T||_F <= rtol * ||m||_F.

    Args:
        m: Square sparse or dense matrix.
        rtol (float, optional): Relative tolerance. Defaults to the configured symmetry tolerance.
    """
    if m.shape[0] != m.shape[1]:
        return False
    rtol = get_settings().symmetry_tol if rtol is None else rtol
    scale = frobenius_norm(m)
    if scale == 0.0:
        return True
    return frobenius_norm(m - m.T) <= rtol * scale


def check_dense_order(order: int, what: str = "matrix"):
    threshold = get_settings().dense_threshold
    if order > threshold:
        raise DenseThresholdError(
            f"{what} of order {order} exceeds the dense threshold {threshold}"
        )


def to_dense(m, what: str = "matrix") -> np.ndarray:
    """Densifies m after checking its larger dimension against the dense threshold."""
    check_dense_order(max(m.shape), what)
    if sp.issparse(m):
        return m.toarray()
    return np.array(m, dtype=np.float64)
