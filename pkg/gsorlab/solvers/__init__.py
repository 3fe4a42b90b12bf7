from gsorlab.solvers.operators import (
    Splitting,
    gbsor_iteration_operator,
    gsor_affine_constant,
    gsor_iteration_operator,
    splitting_matrices,
)
from gsorlab.solvers.options import GsorParams, SolveOptions, SolveReport, SolveStatus
from gsorlab.solvers.presets import PRESETS
from gsorlab.solvers.stationary import (
    GBSOR_FRACTIONS,
    gbsor_omega_upper,
    gbsor_solve,
    gsor_solve,
    uzawa_solve,
)
