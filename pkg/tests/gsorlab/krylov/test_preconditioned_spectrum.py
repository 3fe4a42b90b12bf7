import numpy as np
import pytest

from gsorlab.krylov.preconditioners import build_preconditioner
from gsorlab.krylov.spectrum import (
    count_unit_eigenvalues,
    original_spectrum,
    preconditioned_spectrum,
)
from gsorlab.problem.model import DoubleSaddleProblem


@pytest.mark.parametrize("tau, theta", [(1.0, 1.0), (0.1, 1.0), (1.5, 0.5)])
def test_unit_eigenvalue_multiplicity(diagonal_p_problem, tau, theta):
    spec = build_preconditioner(diagonal_p_problem, "gsor-lower-triangular", tau=tau, theta=theta)
    values = preconditioned_spectrum(diagonal_p_problem, spec)
    assert values.size == diagonal_p_problem.order
    assert count_unit_eigenvalues(values) >= diagonal_p_problem.n
    assert np.max(np.abs(values.imag)) <= 1e-8
    assert values.real.min() > 0


def test_identity_like_problem():
    n = 4
    problem = DoubleSaddleProblem(
        np.eye(n), np.eye(n), np.zeros((1, n)), np.eye(1), np.ones(n), np.ones(n), np.ones(1), P=np.eye(n)
    )
    spec = build_preconditioner(problem, "gsor-lower-triangular", tau=1.0, theta=1.0)
    values = preconditioned_spectrum(problem, spec)
    assert count_unit_eigenvalues(values) == problem.order


def test_original_spectrum_inertia(synthetic_problem):
    values = original_spectrum(synthetic_problem)
    assert values.dtype == np.complex128
    assert np.sum(values.real > 0) == synthetic_problem.n
    assert np.sum(values.real < 0) == synthetic_problem.m + synthetic_problem.p


def test_count_unit_eigenvalues():
    assert count_unit_eigenvalues([1.0, 1.0 + 1e-10, 0.5, 1.0 + 1e-3j]) == 2
    assert count_unit_eigenvalues([1.0 + 1e-3j], tol=1e-2) == 1
