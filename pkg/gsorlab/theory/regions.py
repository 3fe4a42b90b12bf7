"""
Parameter-region scans and characteristic curves.

A region scan varies two of (omega, tau, theta) over a grid with the third
fixed. Each cell is independent: cells are evaluated on a thread pool over
the shared read-only problem and returned in row-major grid order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd

from gsorlab.config.settings import get_settings
from gsorlab.errors import ParameterError
from gsorlab.linalg.eigen import spectral_radius
from gsorlab.solvers.operators import gsor_iteration_operator
from gsorlab.solvers.options import GsorParams, SolveOptions
from gsorlab.solvers.stationary import gsor_solve
from gsorlab.theory.bounds import satisfies_gsor_bounds

logger = logging.getLogger(__name__)

PARAM_NAMES = ("omega", "tau", "theta")
SCAN_MODES = ("empirical", "spectral")
REGION_MAX_ITER = 5000


@dataclass(frozen=True)
class GridAxis:
    param: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.param not in PARAM_NAMES:
            raise ParameterError(f"grid parameter must be one of {PARAM_NAMES}, got {self.param!r}")
        if self.steps < 1:
            raise ParameterError(f"grid needs at least one step, got {self.steps}")
        if not (0 < self.lo <= self.hi):
            raise ParameterError(f"grid range must satisfy 0 < lo <= hi, got {self.lo}:{self.hi}")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def parse_grid(text) -> GridAxis:
    """Parses "param:lo:hi:steps", e.g. "tau:0.1:2:20"."""
    parts = str(text).split(":")
    if len(parts) != 4:
        raise ParameterError(f"grid must look like 'param:lo:hi:steps', got {text!r}")
    try:
        return GridAxis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError as e:
        raise ParameterError(f"invalid grid {text!r}: {e}") from e


@dataclass(frozen=True)
class RegionCell:
    param1: float
    param2: float
    converged: bool
    iters: int | None
    status: str
    final_res: float | None = None
    rho: float | None = None
    within_bounds: bool | None = None


@dataclass(frozen=True)
class CurvePoint:
    value: float
    converged: bool
    iters: int
    final_res: float
    status: str


def _params_for(assignments) -> GsorParams:
    return GsorParams(assignments["omega"], assignments["tau"], assignments["theta"])


def _check_fixed(varying, fixed):
    missing = [p for p in PARAM_NAMES if p not in varying and p not in fixed]
    if missing:
        raise ParameterError(f"no value for {', '.join(missing)}")
    clash = [p for p in varying if p in fixed]
    if clash:
        raise ParameterError(f"{', '.join(clash)} both scanned and fixed")


def region_scan(
    problem,
    axis1: GridAxis,
    axis2: GridAxis,
    fixed: dict,
    opts: SolveOptions | None = None,
    mode="empirical",
    spectral=None,
    workers=None,
) -> list[RegionCell]:
    """
    Scans a two-parameter grid.

    Args:
        problem: Shared problem.
        axis1, axis2: The two scanned parameters.
        fixed (dict): Value of the third parameter, e.g. {"omega": 1.0}.
        opts (optional): Solver options; default tol 1e-8 and 5000 iterations.
        mode (str): "empirical" runs GSOR per cell; "spectral" reports ρ(𝒯) and
            marks cells with ρ < 1 as converged.
        spectral (SpectralData, optional): When given, each cell gets a within_bounds flag.
        workers (int, optional): Thread count; defaults to settings.scan_workers.

    Returns:
        list[RegionCell]: Row-major over (axis1, axis2).
    """
    if axis1.param == axis2.param:
        raise ParameterError("region scan needs two different parameters")
    if mode not in SCAN_MODES:
        raise ParameterError(f"unknown scan mode {mode!r}")
    _check_fixed((axis1.param, axis2.param), fixed)
    opts = opts or SolveOptions(max_iter=REGION_MAX_ITER)
    workers = workers or get_settings().scan_workers

    grid = [(v1, v2) for v1 in axis1.values() for v2 in axis2.values()]

    def evaluate(point):
        v1, v2 = point
        params = _params_for({**fixed, axis1.param: float(v1), axis2.param: float(v2)})
        flag = None if spectral is None else satisfies_gsor_bounds(spectral, params)
        if mode == "spectral":
            rho = spectral_radius(gsor_iteration_operator(problem, params))
            return RegionCell(
                float(v1), float(v2), bool(rho < 1.0), None, "spectral", rho=rho, within_bounds=flag
            )
        _, report = gsor_solve(problem, params, opts)
        return RegionCell(
            float(v1),
            float(v2),
            report.converged,
            report.iterations,
            report.status.value,
            final_res=report.final_res,
            within_bounds=flag,
        )

    logger.info(
        "Region scan %s x %s (%d cells, %s mode, %d workers)",
        axis1.param,
        axis2.param,
        len(grid),
        mode,
        workers,
    )
    with ThreadPoolExecutor(max_workers=workers) as executor:
        cells = list(executor.map(evaluate, grid))
    logger.info("Region scan done: %d/%d cells converged", sum(c.converged for c in cells), len(cells))
    return cells


def iteration_curve(problem, axis: GridAxis, fixed: dict, opts=None) -> list[CurvePoint]:
    """Iteration count of GSOR versus one parameter, the other two fixed."""
    _check_fixed((axis.param,), fixed)
    opts = opts or SolveOptions(max_iter=REGION_MAX_ITER)
    points = []
    for value in axis.values():
        params = _params_for({**fixed, axis.param: float(value)})
        _, report = gsor_solve(problem, params, opts)
        points.append(
            CurvePoint(
                float(value),
                report.converged,
                report.iterations,
                report.final_res,
                report.status.value,
            )
        )
    return points


def cells_to_frame(cells) -> pd.DataFrame:
    """Region CSV table: param1, param2, converged, iters, then the populated extras."""
    frame = pd.DataFrame(
        {
            "param1": [c.param1 for c in cells],
            "param2": [c.param2 for c in cells],
            "converged": [c.converged for c in cells],
            "iters": pd.array([c.iters for c in cells], dtype="Int64"),
            "status": [c.status for c in cells],
        }
    )
    if any(c.final_res is not None for c in cells):
        frame["final_res"] = [c.final_res for c in cells]
    if any(c.rho is not None for c in cells):
        frame["rho"] = [c.rho for c in cells]
    if any(c.within_bounds is not None for c in cells):
        frame["within_bounds"] = [c.within_bounds for c in cells]
    return frame


def curve_to_frame(points, param) -> pd.DataFrame:
    return pd.DataFrame(
        {
            param: [p.value for p in points],
            "converged": [p.converged for p in points],
            "iters": [p.iters for p in points],
            "final_res": [p.final_res for p in points],
            "status": [p.status for p in points],
        }
    )
