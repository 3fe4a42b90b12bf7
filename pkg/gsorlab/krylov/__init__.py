from gsorlab.krylov.gmres import KrylovOptions, gmres_solve
from gsorlab.krylov.minres import minres_solve
from gsorlab.krylov.preconditioners import (
    PreconditionerKind,
    PreconditionerSpec,
    apply_preconditioner,
    build_preconditioner,
    dense_preconditioner,
)
from gsorlab.krylov.spectrum import (
    count_unit_eigenvalues,
    original_spectrum,
    preconditioned_matrix,
    preconditioned_spectrum,
)
