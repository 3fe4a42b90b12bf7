from gsorlab.problem.model import (
    AssembledOperator,
    DoubleSaddleProblem,
    SpectralData,
    assemble,
    relative_residual,
    residual_norm,
    spectral_data,
    spectral_data_dense,
)
