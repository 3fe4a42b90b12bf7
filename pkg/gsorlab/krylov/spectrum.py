"""Dense spectra of the original and preconditioned systems (desk scale)."""

import logging

import numpy as np
import scipy.linalg as sla

from gsorlab.krylov.preconditioners import PreconditionerSpec, dense_preconditioner
from gsorlab.linalg.eigen import dense_eigenvalues
from gsorlab.problem.model import DoubleSaddleProblem, assemble

logger = logging.getLogger(__name__)


def preconditioned_matrix(problem: DoubleSaddleProblem, spec: PreconditionerSpec) -> np.ndarray:
    """𝒫⁻¹𝒜 for the layout the preconditioner was built for."""
    operator = assemble(problem, spec.layout).to_dense()
    return sla.solve(dense_preconditioner(spec), operator, check_finite=False)


def preconditioned_spectrum(problem: DoubleSaddleProblem, spec: PreconditionerSpec) -> np.ndarray:
    """
    Eigenvalues of the preconditioned matrix.

    Returns:
        numpy.ndarray: Complex values sorted by real, then imaginary part.
    """
    values = dense_eigenvalues(preconditioned_matrix(problem, spec))
    logger.debug(
        "Preconditioned spectrum of order %d: [%.6g, %.6g]",
        values.size,
        values.real.min(),
        values.real.max(),
    )
    return values


def original_spectrum(problem: DoubleSaddleProblem) -> np.ndarray:
    """Eigenvalues of the symmetric system matrix, as complex for a uniform CSV schema."""
    values = sla.eigvalsh(problem.operator.to_dense())
    return values.astype(np.complex128)


def count_unit_eigenvalues(values, tol=1e-8) -> int:
    return int(np.sum(np.abs(np.asarray(values) - 1.0) <= tol))
