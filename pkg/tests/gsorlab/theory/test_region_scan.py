import numpy as np
import pytest

from gsorlab.errors import ParameterError
from gsorlab.problem.model import spectral_data_dense
from gsorlab.solvers.options import GsorParams, SolveOptions
from gsorlab.solvers.stationary import gsor_solve
from gsorlab.theory.regions import (
    GridAxis,
    cells_to_frame,
    curve_to_frame,
    iteration_curve,
    parse_grid,
    region_scan,
)

OMEGA = GridAxis("omega", 0.3, 0.6, 2)
TAU = GridAxis("tau", 0.5, 1.0, 2)


def test_parse_grid():
    axis = parse_grid("tau:0.1:2:20")
    assert axis == GridAxis("tau", 0.1, 2.0, 20)
    assert axis.values()[0] == 0.1 and axis.values()[-1] == 2.0
    assert len(axis.values()) == 20


@pytest.mark.parametrize(
    "text", ["tau:0.1:2", "kappa:0.1:1:2", "tau:a:1:2", "tau:1:0.5:3", "tau:0.1:1:0", "tau:0:1:3"]
)
def test_parse_grid_rejects(text):
    with pytest.raises(ParameterError):
        parse_grid(text)


def test_cells_are_row_major(lc_problem):
    cells = region_scan(lc_problem, OMEGA, TAU, {"theta": 1.0})
    assert [(c.param1, c.param2) for c in cells] == [(0.3, 0.5), (0.3, 1.0), (0.6, 0.5), (0.6, 1.0)]
    assert all(c.status in {"converged", "max-iter", "diverged"} for c in cells)


def test_cells_inside_bounds_converge(lc_problem):
    spectral = spectral_data_dense(lc_problem)
    cells = region_scan(
        lc_problem,
        GridAxis("omega", 0.3, 1.2, 4),
        GridAxis("tau", 0.3, 1.5, 4),
        {"theta": 1.0},
        spectral=spectral,
    )
    inside = [c for c in cells if c.within_bounds]
    assert inside
    assert all(c.converged for c in inside)


def test_spectral_mode(lc_problem):
    cells = region_scan(lc_problem, OMEGA, TAU, {"theta": 1.0}, mode="spectral")
    for cell in cells:
        assert cell.iters is None
        assert cell.status == "spectral"
        assert cell.converged == (cell.rho < 1.0)


def test_workers_do_not_change_results(lc_problem):
    serial = region_scan(lc_problem, OMEGA, TAU, {"theta": 1.0}, workers=1)
    parallel = region_scan(lc_problem, OMEGA, TAU, {"theta": 1.0}, workers=4)
    assert serial == parallel


def test_single_cell_matches_solver(lc_problem):
    opts = SolveOptions(max_iter=500)
    (cell,) = region_scan(
        lc_problem, GridAxis("tau", 0.8, 0.8, 1), GridAxis("theta", 0.9, 0.9, 1), {"omega": 0.5}, opts
    )
    _, report = gsor_solve(lc_problem, GsorParams(0.5, 0.8, 0.9), opts)
    assert cell.iters == report.iterations
    assert cell.final_res == report.final_res


def test_region_frame_columns(lc_problem):
    spectral = spectral_data_dense(lc_problem)
    frame = cells_to_frame(region_scan(lc_problem, OMEGA, TAU, {"theta": 1.0}, spectral=spectral))
    assert list(frame.columns) == [
        "param1", "param2", "converged", "iters", "status", "final_res", "within_bounds",
    ]
    assert len(frame) == 4
    spectral_frame = cells_to_frame(region_scan(lc_problem, OMEGA, TAU, {"theta": 1.0}, mode="spectral"))
    assert "rho" in spectral_frame.columns
    assert spectral_frame["iters"].isna().all()


@pytest.mark.parametrize(
    "axis2, fixed",
    [
        (OMEGA, {"theta": 1.0}),  # same parameter twice
        (TAU, {}),  # theta missing
        (TAU, {"theta": 1.0, "omega": 0.5}),  # omega scanned and fixed
    ],
)
def test_region_scan_rejects(lc_problem, axis2, fixed):
    with pytest.raises(ParameterError):
        region_scan(lc_problem, OMEGA, axis2, fixed)


def test_unknown_mode(lc_problem):
    with pytest.raises(ParameterError):
        region_scan(lc_problem, OMEGA, TAU, {"theta": 1.0}, mode="guess")


def test_iteration_curve(lc_problem):
    points = iteration_curve(lc_problem, GridAxis("tau", 0.2, 1.0, 3), {"omega": 0.6, "theta": 1.0})
    np.testing.assert_allclose([p.value for p in points], [0.2, 0.6, 1.0])
    assert all(p.converged for p in points)
    frame = curve_to_frame(points, "tau")
    assert list(frame.columns) == ["tau", "converged", "iters", "final_res", "status"]

    with pytest.raises(ParameterError):
        iteration_curve(lc_problem, GridAxis("tau", 0.2, 1.0, 3), {"omega": 0.6})
