"""
Experiment commands. Each takes a validated RunConfig, writes its outputs
under ``config.out`` (default: settings.output_dir) and returns a
CommandResult. They are shared by the CLI and the plan executor.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
import pandas as pd

from gsorlab.config.settings import get_settings
from gsorlab.errors import ConfigError
from gsorlab.experiments.run_config import AUTO_PRESET, RunConfig
from gsorlab.krylov.gmres import KrylovOptions, gmres_solve
from gsorlab.krylov.minres import minres_solve
from gsorlab.krylov.preconditioners import PreconditionerKind, build_preconditioner
from gsorlab.krylov.spectrum import (
    count_unit_eigenvalues,
    original_spectrum,
    preconditioned_spectrum,
)
from gsorlab.problem.generators import generate_structured, generate_synthetic
from gsorlab.problem.io import export_mm, import_mm
from gsorlab.problem.model import DoubleSaddleProblem, assemble, assembled_rhs, spectral_data
from gsorlab.solvers.options import GsorParams, SolveOptions, SolveReport, SolveStatus
from gsorlab.solvers.presets import PRESETS
from gsorlab.solvers.stationary import (
    GBSOR_FRACTIONS,
    gbsor_omega_upper,
    gbsor_solve,
    gsor_solve,
    uzawa_solve,
)
from gsorlab.theory.bounds import (
    condition_number_bound,
    gsor_param_bounds,
    omega1_conditions,
    omega1_tau_upper,
    omega1_theta_upper,
    preconditioned_interval,
    select_params,
    uzawa_conditions,
    uzawa_tau_upper,
)
from gsorlab.theory.regions import (
    REGION_MAX_ITER,
    cells_to_frame,
    curve_to_frame,
    iteration_curve,
    parse_grid,
    region_scan,
)
from gsorlab.utils.path_helpers import get_output_path

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"
UNIT_TOL = 1e-8


class ExitCode(IntEnum):
    OK = 0
    MAX_ITER = 2
    DIVERGED = 3
    CONFIG_ERROR = 4
    NUMERIC_FAILURE = 5


STATUS_EXIT = {
    SolveStatus.CONVERGED: ExitCode.OK,
    SolveStatus.MAX_ITER: ExitCode.MAX_ITER,
    SolveStatus.DIVERGED: ExitCode.DIVERGED,
}


@dataclass
class CommandResult:
    exit_code: int
    payload: dict
    files: list[str] = field(default_factory=list)

    def to_dict(self):
        return {"exit_code": int(self.exit_code), "payload": self.payload, "files": self.files}


def write_json(path, data):
    with open(path, "w") as f:
        f.write(json.dumps(data, indent=2, sort_keys=True))
        f.write("\n")
    return path


def write_csv(frame: pd.DataFrame, path):
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path


def _out_dir(config: RunConfig):
    return config.out or get_settings().output_dir


def load_problem(config: RunConfig) -> DoubleSaddleProblem:
    """Builds or imports the problem named by the config's source."""
    if config.import_path is not None:
        return import_mm(config.import_path)
    if config.generate == "synthetic":
        return generate_synthetic(
            config.seed,
            config.n,
            config.m,
            config.p,
            shape=config.shape,
            p_mode=config.p_mode,
            nu_target=config.nu_target,
        )
    return generate_structured(config.seed, config.N, config.generate)


def _problem_summary(problem: DoubleSaddleProblem):
    return {
        "n": problem.n,
        "m": problem.m,
        "p": problem.p,
        "p_defaulted": problem.p_defaulted,
        "provenance": problem.provenance,
    }


def resolve_gsor_params(config: RunConfig, problem: DoubleSaddleProblem) -> GsorParams:
    """Explicit triple or preset; "auto" picks the midpoint of the sufficient region."""
    params = config.gsor_params
    if params is not None:
        return params
    if config.preset == AUTO_PRESET:
        return select_params(spectral_data(problem), config.theta or 1.0)
    raise ConfigError("no GSOR parameters given")


def _krylov_run(problem, config, kind, tau=1.0, theta=1.0, layout="symmetric", minres=False):
    spec = None
    if kind != "none":
        spec = build_preconditioner(problem, kind, tau=tau, theta=theta, layout=layout)
    opts = KrylovOptions(
        restart=config.restart,
        tol=config.tol,
        max_iter=config.max_iter,
        record_history=config.history,
    )
    operator = assemble(problem, layout)
    b = assembled_rhs(problem, layout)
    solver = minres_solve if minres else gmres_solve
    return solver(operator, spec, b, opts)


def run_solver(problem: DoubleSaddleProblem, config: RunConfig):
    """Runs the configured solver; returns (solution, SolveReport)."""
    opts = SolveOptions(config.tol, config.max_iter, config.history)
    if config.solver == "gsor":
        return gsor_solve(problem, resolve_gsor_params(config, problem), opts)
    if config.solver == "uzawa":
        return uzawa_solve(problem, config.tau, opts)
    if config.solver == "gbsor":
        return gbsor_solve(problem, config.omega, opts)
    if config.solver == "minres":
        return _krylov_run(problem, config, config.preconditioner, minres=True)
    return _krylov_run(
        problem,
        config,
        config.preconditioner,
        tau=config.tau or 1.0,
        theta=config.theta or 1.0,
        layout=config.layout,
    )


def _history_frame(report: SolveReport):
    return pd.DataFrame(
        {"iteration": np.arange(len(report.history)), "res": report.history}
    )


def cmd_solve(config: RunConfig) -> CommandResult:
    """
    Solves one problem with one method and writes a JSON report
    (Iter, CPU, Res, status) plus an optional residual history CSV.

    The exit code reflects the solver status: 0 converged, 2 max-iter, 3 diverged.

    Plan Example:
    ```yaml
    - name: Solve an lc-like problem at the midpoint parameters
      command: solve
      arguments:
        generate: lc-like
        N: 3
        solver: gsor
        preset: auto
        omit_timing: true
      output_var: lc_solve
    ```
    """
    problem = load_problem(config)
    w, report = run_solver(problem, config)
    out_dir = _out_dir(config)

    solution_error = None
    if problem.solution is not None:
        solution_error = float(
            np.linalg.norm(w - problem.solution) / max(np.linalg.norm(problem.solution), 1e-300)
        )
    payload = report.to_dict(include_timing=not config.omit_timing)
    payload["problem"] = _problem_summary(problem)
    payload["solution_error"] = solution_error

    files = [write_json(get_output_path(out_dir, f"solve_{report.method}.json"), payload)]
    if report.history is not None:
        files.append(
            write_csv(
                _history_frame(report), get_output_path(out_dir, f"history_{report.method}.csv")
            )
        )
    return CommandResult(STATUS_EXIT[report.status], payload, files)


def _fixed_params(config: RunConfig, scanned):
    params = config.gsor_params
    fixed = {}
    for name in ("omega", "tau", "theta"):
        if name not in scanned:
            fixed[name] = getattr(params, name) if params else getattr(config, name)
    return fixed


def cmd_region(config: RunConfig) -> CommandResult:
    """
    Scans two of (omega, tau, theta) on a grid and writes one CSV row per cell
    (param1, param2, converged, iters, status, final_res or rho, within_bounds).

    Plan Example:
    ```yaml
    - name: Scan omega and tau at theta = 1
      command: region
      arguments:
        generate: lc-like
        N: 3
        grid:
          - "omega:0.2:1.0:3"
          - "tau:0.2:1.0:3"
        theta: 1.0
        max_iter: 2000
      output_var: lc_region
    ```
    """
    problem = load_problem(config)
    axis1, axis2 = (parse_grid(g) for g in config.grid)
    fixed = _fixed_params(config, {axis1.param, axis2.param})
    opts = SolveOptions(config.tol, min(config.max_iter, REGION_MAX_ITER))
    cells = region_scan(
        problem,
        axis1,
        axis2,
        fixed,
        opts,
        mode=config.mode,
        spectral=spectral_data(problem),
        workers=config.workers,
    )
    name = f"region_{axis1.param}_{axis2.param}.csv"
    path = write_csv(cells_to_frame(cells), get_output_path(_out_dir(config), name))
    payload = {
        "params": [axis1.param, axis2.param],
        "fixed": fixed,
        "mode": config.mode,
        "cells": len(cells),
        "converged": sum(c.converged for c in cells),
    }
    return CommandResult(ExitCode.OK, payload, [path])


def cmd_curve(config: RunConfig) -> CommandResult:
    """
    Iteration count versus one parameter with the other two fixed.

    Plan Example:
    ```yaml
    - name: Iterations versus tau
      command: curve
      arguments:
        generate: lc-like
        N: 3
        grid: "tau:0.2:1.0:5"
        omega: 1.0
        theta: 1.0
        max_iter: 2000
      output_var: tau_curve
    ```
    """
    problem = load_problem(config)
    axis = parse_grid(config.grid[0])
    fixed = _fixed_params(config, {axis.param})
    opts = SolveOptions(config.tol, min(config.max_iter, REGION_MAX_ITER))
    points = iteration_curve(problem, axis, fixed, opts)
    path = write_csv(
        curve_to_frame(points, axis.param),
        get_output_path(_out_dir(config), f"curve_{axis.param}.csv"),
    )
    payload = {
        "param": axis.param,
        "fixed": fixed,
        "points": len(points),
        "converged": sum(p.converged for p in points),
    }
    return CommandResult(ExitCode.OK, payload, [path])


def _spectrum_frame(values):
    values = np.asarray(values, dtype=np.complex128)
    return pd.DataFrame({"real": values.real, "imag": values.imag})


def cmd_spectrum(config: RunConfig) -> CommandResult:
    """
    Writes the dense spectra of 𝒜 and of the GSOR-preconditioned matrix for
    (tau, theta), default 1 each, as two CSVs with columns real, imag.

    Plan Example:
    ```yaml
    - name: Spectrum with tau = 0.1
      command: spectrum
      arguments:
        generate: lc-like
        N: 3
        tau: 0.1
        theta: 1.0
      output_var: lc_spectrum
    ```
    """
    problem = load_problem(config)
    tau, theta = config.tau or 1.0, config.theta or 1.0
    spec = build_preconditioner(
        problem, PreconditionerKind.GSOR, tau=tau, theta=theta, layout=config.layout
    )
    original = original_spectrum(problem)
    preconditioned = preconditioned_spectrum(problem, spec)

    interval = preconditioned_interval(spectral_data(problem), tau, theta)
    others = preconditioned[np.abs(preconditioned - 1.0) > UNIT_TOL]
    outside = int(sum(not interval.contains(v.real, UNIT_TOL) for v in others))

    out_dir = _out_dir(config)
    tag = f"tau{tau:g}_theta{theta:g}"
    files = [
        write_csv(_spectrum_frame(original), get_output_path(out_dir, "spectrum_original.csv")),
        write_csv(
            _spectrum_frame(preconditioned),
            get_output_path(out_dir, f"spectrum_preconditioned_{tag}.csv"),
        ),
    ]
    payload = {
        "tau": tau,
        "theta": theta,
        "n": problem.n,
        "unit_eigenvalues": count_unit_eigenvalues(preconditioned, UNIT_TOL),
        "max_abs_imag": float(np.max(np.abs(preconditioned.imag))),
        "min_real": float(preconditioned.real.min()),
        "max_real": float(preconditioned.real.max()),
        "interval": interval.to_dict(),
        "outside_interval": outside,
    }
    return CommandResult(ExitCode.OK, payload, files)


def cmd_bounds(config: RunConfig) -> CommandResult:
    """
    Spectral data and every closed-form bound derived from it, as JSON.

    theta defaults to 1 and tau to the midpoint choice for that theta.

    Plan Example:
    ```yaml
    - name: Bounds for the lc-like family
      command: bounds
      arguments:
        generate: lc-like
        N: 3
      output_var: lc_bounds
    ```
    """
    problem = load_problem(config)
    spectral = spectral_data(problem)
    theta = config.theta or 1.0
    selected = select_params(spectral, theta)
    tau = config.tau or selected.tau

    payload = {
        "problem": _problem_summary(problem),
        "spectral": spectral.to_dict(),
        "theta": theta,
        "tau": tau,
        "param_bounds": gsor_param_bounds(spectral, theta, tau).to_dict(),
        "selected": selected.to_dict(),
        "omega1": {
            "theta_upper": omega1_theta_upper(spectral),
            "tau_upper": omega1_tau_upper(spectral, theta),
            "satisfied": omega1_conditions(spectral, theta, tau),
        },
        "uzawa": {
            "tau_upper": uzawa_tau_upper(spectral),
            "satisfied": uzawa_conditions(spectral, tau),
        },
        "gbsor_omega_upper": gbsor_omega_upper(spectral.nu_max),
        "interval": preconditioned_interval(spectral, tau, theta).to_dict(),
    }
    if spectral.mu_min > 0:
        payload["condition"] = condition_number_bound(spectral, tau, theta).to_dict()
    path = write_json(get_output_path(_out_dir(config), "bounds.json"), payload)
    return CommandResult(ExitCode.OK, payload, [path])


def _lineup(problem, config, spectral):
    """(label, thunk) pairs in table order."""
    opts = SolveOptions(config.tol, config.max_iter)
    family = problem.provenance.get("family")
    if family in PRESETS:
        gsor = list(PRESETS[family].items())
    else:
        gsor = [("GSOR", select_params(spectral, 1.0))]
    runs = [(label, lambda p=params: gsor_solve(problem, p, opts)) for label, params in gsor]

    uzawa_tau = 1.0 - spectral.nu_max
    if uzawa_tau > 0:
        runs.append(("Uzawa", lambda: uzawa_solve(problem, uzawa_tau, opts)))
    else:
        runs.append(("Uzawa", None))

    s = gbsor_omega_upper(spectral.nu_max)
    for label, fraction in GBSOR_FRACTIONS.items():
        runs.append((label, lambda w=fraction * s: gbsor_solve(problem, w, opts)))

    runs.append(
        ("BPMINRES", lambda: _krylov_run(problem, config, "block-diagonal", minres=True))
    )
    runs.append(("BPGMRES", lambda: _krylov_run(problem, config, "block-triangular")))
    runs.append(("GPGMRES", lambda: _krylov_run(problem, config, "gsor-lower-triangular")))
    return runs


def cmd_compare(config: RunConfig) -> CommandResult:
    """
    Runs the whole method line-up (GSOR presets, Uzawa with tau = 1 - nu_max,
    GBSOR at s/4, s/2, 3s/4, BPMINRES, BPGMRES, GPGMRES) on one problem and
    writes one CSV row per method. Uzawa is skipped when nu_max >= 1.

    Plan Example:
    ```yaml
    - name: Compare every method on a small darcy-like problem
      command: compare
      arguments:
        generate: darcy-like
        N: 2
        max_iter: 3000
        omit_timing: true
      output_var: darcy_compare
    ```
    """
    problem = load_problem(config)
    spectral = spectral_data(problem)
    rows = []
    for label, run in _lineup(problem, config, spectral):
        if run is None:
            logger.warning("%s skipped: nu_max = %.4f", label, spectral.nu_max)
            rows.append({"method": label, "status": "skipped"})
            continue
        _, report = run()
        row = report.to_dict(include_timing=not config.omit_timing)
        row.pop("params")
        row["solver"] = row.pop("method")
        rows.append({"method": label, **row})

    columns = ["method", "solver", "status", "Iter", "Res", "inner_solves"]
    if not config.omit_timing:
        columns += ["CPU", "factor_time"]
    frame = pd.DataFrame(rows).reindex(columns=columns)
    frame["Iter"] = frame["Iter"].astype("Int64")
    frame["inner_solves"] = frame["inner_solves"].astype("Int64")
    path = write_csv(frame, get_output_path(_out_dir(config), "compare.csv"))
    payload = {
        "problem": _problem_summary(problem),
        "spectral": spectral.to_dict(),
        "methods": [r["method"] for r in rows],
        "converged": [r["method"] for r in rows if r["status"] == SolveStatus.CONVERGED.value],
    }
    return CommandResult(ExitCode.OK, payload, [path])


def cmd_export(config: RunConfig) -> CommandResult:
    """
    Writes the problem as Matrix Market files plus a manifest.json.

    Plan Example:
    ```yaml
    - name: Export a synthetic problem
      command: export
      arguments:
        generate: synthetic
        n: 20
        m: 6
        p: 4
        seed: 7
        out: exported
      output_var: bundle
    ```
    """
    problem = load_problem(config)
    out_dir = _out_dir(config)
    manifest = export_mm(problem, out_dir)
    files = sorted(os.path.join(out_dir, name) for name in os.listdir(out_dir))
    payload = {"manifest": manifest, "problem": _problem_summary(problem)}
    return CommandResult(ExitCode.OK, payload, files)


COMMAND_REGISTRY = {
    "solve": cmd_solve,
    "region": cmd_region,
    "curve": cmd_curve,
    "spectrum": cmd_spectrum,
    "bounds": cmd_bounds,
    "compare": cmd_compare,
    "export": cmd_export,
}


def run_command(config: RunConfig) -> CommandResult:
    """Dispatches a validated config; dry runs stop after validation."""
    if config.dry_run:
        logger.info("Dry run of %s: config is valid", config.command)
        return CommandResult(ExitCode.OK, {"status": "dry-run", "config": config.to_dict()})
    logger.info("Running %s", config.command)
    return COMMAND_REGISTRY[config.command](config)
