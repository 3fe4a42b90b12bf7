from gsorlab.linalg.cholesky import (
    CholeskyFactor,
    CountingSolver,
    SolveCounter,
    TridiagonalFactor,
    cholesky_factor,
    cholesky_solve,
)
from gsorlab.linalg.eigen import (
    EigenEstimate,
    dense_eigenvalues,
    extremal_symmetric_eigenvalue,
    spectral_radius,
)
from gsorlab.linalg.sparse import as_csr, spmv
