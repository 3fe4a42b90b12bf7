import numpy as np
import pytest

from gsorlab.errors import ParameterError
from gsorlab.problem.generators import (
    DARCY_NU_MAX,
    LC_NU_MAX,
    generate_structured,
    generate_synthetic,
    structured_dims,
    toeplitz_tridiagonal,
)
from gsorlab.problem.model import relative_residual, spectral_data_dense


def test_same_seed_same_problem():
    a = generate_synthetic(seed=9, n=20, m=5, p=4)
    b = generate_synthetic(seed=9, n=20, m=5, p=4)
    for name in ("A", "B", "C", "D", "P"):
        np.testing.assert_array_equal(getattr(a, name).toarray(), getattr(b, name).toarray())
    np.testing.assert_array_equal(a.rhs, b.rhs)


def test_different_seed_different_problem():
    a = generate_synthetic(seed=9, n=20, m=5, p=4)
    b = generate_synthetic(seed=10, n=20, m=5, p=4)
    assert not np.array_equal(a.rhs, b.rhs)


def test_synthetic_dims_and_planted_solution(synthetic_problem):
    assert synthetic_problem.dims == (30, 10, 8)
    res, relative = relative_residual(synthetic_problem, synthetic_problem.solution)
    assert relative and res < 1e-12
    assert synthetic_problem.provenance == {"family": "synthetic", "seed": 1, "p_mode": "schur"}


def test_invalid_sizes():
    with pytest.raises(ParameterError):
        generate_synthetic(seed=0, n=4, m=5, p=2)
    with pytest.raises(ParameterError):
        generate_synthetic(seed=0, n=4, m=2, p=2, shape="unknown")


def test_p_modes():
    ident = generate_synthetic(seed=4, n=16, m=4, p=3, p_mode="identity")
    np.testing.assert_array_equal(ident.P.toarray(), np.eye(4))
    diag = generate_synthetic(seed=4, n=16, m=4, p=3, p_mode="diagonal")
    np.testing.assert_allclose(diag.P.diagonal(), np.diag(diag.schur_complement()), rtol=1e-12)
    assert diag.P.nnz == 4


def test_nu_target_is_hit():
    problem = generate_synthetic(seed=5, n=20, m=6, p=5, nu_target=0.3)
    assert spectral_data_dense(problem).nu_max == pytest.approx(0.3, rel=1e-8)
    assert problem.provenance["nu_target"] == 0.3


def test_toeplitz_spectrum_inside_range():
    values = np.linalg.eigvalsh(toeplitz_tridiagonal(12, 0.5, 4.5).toarray())
    assert values.min() > 0.5 and values.max() < 4.5


def test_structured_dims():
    assert structured_dims(8, "darcy-like") == (578, 81, 289)
    assert structured_dims(4, "lc-like") == (12, 4, 4)
    with pytest.raises(ParameterError):
        structured_dims(4, "stokes")


def test_lc_like_spectral_targets(lc_problem):
    assert lc_problem.dims == (12, 4, 4)
    sd = spectral_data_dense(lc_problem)
    assert sd.nu_max == pytest.approx(LC_NU_MAX, rel=1e-8)
    assert sd.mu_min == pytest.approx(1.0, rel=1e-8)
    assert sd.mu_max == pytest.approx(1.0, rel=1e-8)


def test_darcy_like_spectral_targets(darcy_problem):
    assert darcy_problem.dims == structured_dims(2, "darcy-like")
    sd = spectral_data_dense(darcy_problem)
    assert sd.nu_max == pytest.approx(DARCY_NU_MAX, rel=1e-8)
    assert sd.mu_max == pytest.approx(1.0, rel=1e-8)
    assert darcy_problem.provenance == {"family": "darcy-like", "seed": 0, "N": 2}


def test_structured_size_parameter_is_checked():
    with pytest.raises(ParameterError):
        generate_structured(seed=0, N=1, family="lc-like")
