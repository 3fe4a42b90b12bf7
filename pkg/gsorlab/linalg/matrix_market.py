"""Matrix Market read/write for sparse blocks and right-hand-side vectors."""

import numpy as np
import scipy.io

from gsorlab.linalg.sparse import as_csr

# 17 significant digits round-trip every IEEE double exactly
MM_PRECISION = 17


def write_matrix(path, matrix, comment=""):
    scipy.io.mmwrite(
        path, as_csr(matrix).tocoo(), comment=comment, field="real", precision=MM_PRECISION
    )


def read_matrix(path):
    data = scipy.io.mmread(path)
    if isinstance(data, np.ndarray):
        return as_csr(data)
    return as_csr(data.tocsr())


def write_vector(path, vector, comment=""):
    column = np.asarray(vector, dtype=np.float64).reshape(-1, 1)
    scipy.io.mmwrite(path, column, comment=comment, field="real", precision=MM_PRECISION)


def read_vector(path):
    data = scipy.io.mmread(path)
    if not isinstance(data, np.ndarray):
        data = data.toarray()
    return np.asarray(data, dtype=np.float64).ravel()
