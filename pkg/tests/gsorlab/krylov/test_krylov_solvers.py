import numpy as np
import pytest
import scipy.linalg as sla

from gsorlab.errors import DimensionMismatchError, ParameterError
from gsorlab.krylov.gmres import KrylovOptions, gmres_solve
from gsorlab.krylov.minres import minres_solve
from gsorlab.krylov.preconditioners import (
    apply_preconditioner,
    build_preconditioner,
    dense_preconditioner,
)
from gsorlab.problem.model import assemble, assembled_rhs, relative_residual
from gsorlab.solvers.options import SolveStatus


def test_gmres_identity_takes_one_step(rng):
    b = rng.standard_normal(6)
    x, report = gmres_solve(np.eye(6), None, b)
    np.testing.assert_allclose(x, b)
    assert report.iterations == 1
    assert report.status is SolveStatus.CONVERGED


@pytest.mark.parametrize("layout", ["symmetric", "unsymmetric"])
def test_gsor_preconditioned_gmres_iteration_bound(diagonal_p_problem, layout):
    pb = diagonal_p_problem
    spec = build_preconditioner(pb, "gsor-lower-triangular", tau=1.0, theta=1.0, layout=layout)
    x, report = gmres_solve(
        assemble(pb, layout), spec, assembled_rhs(pb, layout), KrylovOptions(tol=1e-10)
    )
    assert report.status is SolveStatus.CONVERGED
    assert report.iterations <= pb.m + pb.p + 6
    assert relative_residual(pb, x)[0] <= 1e-9
    assert report.inner_solves >= 3 * report.iterations


def test_left_preconditioning_matches_explicit_system(synthetic_problem):
    pb = synthetic_problem
    spec = build_preconditioner(pb, "gsor-lower-triangular", tau=0.9, theta=1.1)
    opts = KrylovOptions(tol=1e-15, max_iter=5)
    x_left, _ = gmres_solve(pb.operator, spec, pb.rhs, opts)

    M = dense_preconditioner(spec)
    explicit = sla.solve(M, pb.operator.to_dense())
    x_explicit, _ = gmres_solve(explicit, None, apply_preconditioner(spec, pb.rhs), opts)
    np.testing.assert_allclose(x_left, x_explicit, rtol=1e-7, atol=1e-9)


def test_gmres_block_triangular(synthetic_problem):
    spec = build_preconditioner(synthetic_problem, "block-triangular")
    x, report = gmres_solve(synthetic_problem.operator, spec, synthetic_problem.rhs)
    assert report.status is SolveStatus.CONVERGED
    np.testing.assert_allclose(x, synthetic_problem.solution, atol=1e-5)


def test_gmres_history_and_restart(synthetic_problem):
    spec = build_preconditioner(synthetic_problem, "gsor-lower-triangular", tau=1.0, theta=1.0)
    _, report = gmres_solve(
        synthetic_problem.operator,
        spec,
        synthetic_problem.rhs,
        KrylovOptions(restart=5, record_history=True),
    )
    assert report.status is SolveStatus.CONVERGED
    assert len(report.history) == report.iterations
    assert report.params["restart"] == 5


def test_gmres_zero_rhs_and_mismatch():
    x, report = gmres_solve(np.eye(3), None, np.zeros(3))
    assert report.iterations == 0 and not x.any()
    with pytest.raises(DimensionMismatchError):
        gmres_solve(np.eye(3), None, np.ones(4))


def test_krylov_options_validation():
    for kwargs in ({"restart": 0}, {"tol": 0.0}, {"max_iter": 0}):
        with pytest.raises(ParameterError):
            KrylovOptions(**kwargs)


def test_minres_diagonal(rng):
    matrix = np.diag(np.repeat([1.0, 2.0, 3.0], 3))
    b = rng.standard_normal(9)
    x, report = minres_solve(matrix, None, b)
    assert report.status is SolveStatus.CONVERGED
    assert report.iterations <= 3
    np.testing.assert_allclose(matrix @ x, b, atol=1e-8)


def test_minres_block_diagonal(synthetic_problem):
    spec = build_preconditioner(synthetic_problem, "block-diagonal")
    x, report = minres_solve(
        synthetic_problem.operator, spec, synthetic_problem.rhs, KrylovOptions(record_history=True)
    )
    assert report.status is SolveStatus.CONVERGED
    assert report.method == "minres"
    assert report.final_res <= 1e-8
    assert report.inner_solves > 0
    assert len(report.history) == report.iterations + 1
    np.testing.assert_allclose(x, synthetic_problem.solution, atol=1e-5)


def test_minres_rejects_indefinite_setups(synthetic_problem):
    pb = synthetic_problem
    gsor = build_preconditioner(pb, "gsor-lower-triangular", tau=1.0, theta=1.0)
    with pytest.raises(ParameterError):
        minres_solve(pb.operator, gsor, pb.rhs)
    with pytest.raises(ParameterError):
        minres_solve(assemble(pb, "unsymmetric"), None, assembled_rhs(pb, "unsymmetric"))


def test_minres_zero_rhs():
    x, report = minres_solve(np.eye(4), None, np.zeros(4))
    assert report.status is SolveStatus.CONVERGED
    assert report.iterations == 0 and not x.any()


@pytest.mark.slow
@pytest.mark.parametrize("index", range(50))
def test_preconditioned_krylov_over_suite(suite_problem, index):
    pb = suite_problem(index)
    opts = KrylovOptions(restart=pb.order, tol=1e-10)
    for layout in ("symmetric", "unsymmetric"):
        spec = build_preconditioner(pb, "gsor-lower-triangular", tau=1.0, theta=1.0, layout=layout)
        x, report = gmres_solve(assemble(pb, layout), spec, assembled_rhs(pb, layout), opts)
        assert report.status is SolveStatus.CONVERGED, layout
        assert report.iterations <= pb.m + pb.p + 6, layout
        assert relative_residual(pb, x)[0] <= 1e-9

    block = build_preconditioner(pb, "block-diagonal")
    _, report = minres_solve(pb.operator, block, pb.rhs, KrylovOptions())
    assert report.status is SolveStatus.CONVERGED
