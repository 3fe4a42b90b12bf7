import json
import os

import pandas as pd
import pytest

from gsorlab.experiments.commands import ExitCode, run_command
from gsorlab.experiments.run_config import build_config

LC = {"generate": "lc-like", "N": 3}
DARCY = {"generate": "darcy-like", "N": 2}


def _run(command, out, **values):
    return run_command(build_config(command, {}, {**values, "out": str(out)}))


def test_solve_writes_report(tmp_path):
    result = _run("solve", tmp_path, **LC, preset="auto", omit_timing=True)
    assert result.exit_code == ExitCode.OK
    assert result.files == [str(tmp_path / "solve_gsor.json")]
    with open(result.files[0]) as fh:
        report = json.load(fh)
    assert report == result.payload
    assert report["status"] == "converged"
    assert "CPU" not in report
    assert report["inner_solves"] == 3 * report["Iter"]
    assert report["problem"]["provenance"] == {"family": "lc-like", "seed": 0, "N": 3}
    assert report["solution_error"] < 1e-6


def test_solve_history_csv(tmp_path):
    result = _run("solve", tmp_path, **LC, preset="lc-like/GSORb", history=True)
    assert "CPU" in result.payload
    history = pd.read_csv(tmp_path / "history_gsor.csv")
    assert list(history.columns) == ["iteration", "res"]
    assert len(history) == result.payload["Iter"] + 1


def test_solve_exit_codes(tmp_path):
    capped = _run("solve", tmp_path / "capped", **LC, preset="auto", max_iter=2)
    assert capped.exit_code == ExitCode.MAX_ITER
    diverged = _run("solve", tmp_path / "uzawa", **DARCY, solver="uzawa", tau=1.0, max_iter=50000)
    assert diverged.exit_code == ExitCode.DIVERGED
    assert diverged.payload["status"] == "diverged"


@pytest.mark.parametrize(
    "values",
    [
        {"solver": "gbsor"},
        {"solver": "gmres"},
        {"solver": "gmres", "layout": "unsymmetric", "tau": 0.5},
        {"solver": "gmres", "preconditioner": "block-triangular"},
        {"solver": "gmres", "preconditioner": "none"},
        {"solver": "minres", "preconditioner": "block-diagonal"},
    ],
)
def test_solve_with_other_solvers(tmp_path, values):
    result = _run("solve", tmp_path, **LC, **values)
    assert result.exit_code == ExitCode.OK
    assert os.path.exists(tmp_path / f"solve_{result.payload['method']}.json")


def test_dry_run_writes_nothing(tmp_path):
    out = tmp_path / "never"
    result = _run("solve", out, **LC, preset="auto", dry_run=True)
    assert result.exit_code == ExitCode.OK
    assert result.payload["status"] == "dry-run"
    assert result.payload["config"]["N"] == 3
    assert result.files == []
    assert not out.exists()


def test_outputs_are_reproducible(tmp_path):
    for name in ("a", "b"):
        _run("solve", tmp_path / name, **LC, preset="auto", omit_timing=True, history=True)
        _run("region", tmp_path / name, **LC, grid=["omega:0.2:1.0:2", "tau:0.2:1.0:2"], theta=1.0)
    for file_name in ("solve_gsor.json", "history_gsor.csv", "region_omega_tau.csv"):
        assert (tmp_path / "a" / file_name).read_bytes() == (tmp_path / "b" / file_name).read_bytes()


def test_region(tmp_path):
    result = _run(
        "region", tmp_path, **LC, grid=["omega:0.2:1.0:3", "tau:0.2:1.0:3"], theta=1.0, max_iter=2000
    )
    assert result.payload["cells"] == 9
    assert result.payload["fixed"] == {"theta": 1.0}
    frame = pd.read_csv(tmp_path / "region_omega_tau.csv")
    assert len(frame) == 9
    assert {"param1", "param2", "converged", "iters", "within_bounds"} <= set(frame.columns)


def test_region_spectral_mode(tmp_path):
    result = _run(
        "region", tmp_path, **LC, grid=["tau:0.2:1.0:2", "theta:0.5:1.5:2"], omega=0.5, mode="spectral"
    )
    frame = pd.read_csv(tmp_path / "region_tau_theta.csv")
    assert "rho" in frame.columns
    assert result.payload["mode"] == "spectral"


def test_curve(tmp_path):
    result = _run("curve", tmp_path, **LC, grid="tau:0.2:1.0:5", omega=1.0, theta=1.0)
    assert result.payload["points"] == 5
    frame = pd.read_csv(tmp_path / "curve_tau.csv")
    assert list(frame.columns) == ["tau", "converged", "iters", "final_res", "status"]


def test_spectrum(tmp_path):
    result = _run("spectrum", tmp_path, **LC, tau=0.1, theta=1.0)
    names = sorted(os.path.basename(f) for f in result.files)
    assert names == ["spectrum_original.csv", "spectrum_preconditioned_tau0.1_theta1.csv"]
    frame = pd.read_csv(tmp_path / "spectrum_preconditioned_tau0.1_theta1.csv")
    assert list(frame.columns) == ["real", "imag"]
    assert len(frame) == 9 + 3 + 3
    assert result.payload["n"] == 9
    assert result.payload["min_real"] > 0


def test_bounds(tmp_path):
    result = _run("bounds", tmp_path, **LC)
    with open(tmp_path / "bounds.json") as fh:
        bounds = json.load(fh)
    assert bounds == result.payload
    assert bounds["spectral"]["nu_max"] == pytest.approx(0.175, rel=1e-6)
    assert bounds["selected"]["tau"] == pytest.approx(1.0, rel=1e-6)
    assert bounds["uzawa"]["satisfied"] is True
    assert bounds["omega1"]["theta_upper"] == pytest.approx(2.0 / 1.175, rel=1e-6)
    assert "condition" in bounds

    darcy = _run("bounds", tmp_path / "darcy", **DARCY).payload
    assert darcy["uzawa"]["satisfied"] is False


def test_compare(tmp_path):
    result = _run("compare", tmp_path, **DARCY, max_iter=3000, omit_timing=True)
    assert result.payload["methods"] == [
        "GSORa", "GSORb", "GSORc", "GSORd", "Uzawa", "GBSORa", "GBSORb", "GBSORc",
        "BPMINRES", "BPGMRES", "GPGMRES",
    ]
    frame = pd.read_csv(tmp_path / "compare.csv")
    assert list(frame.columns) == ["method", "solver", "status", "Iter", "Res", "inner_solves"]
    assert frame.set_index("method").loc["Uzawa", "status"] == "skipped"
    assert {"BPMINRES", "BPGMRES", "GPGMRES"} <= set(result.payload["converged"])


def test_compare_on_synthetic_uses_selected_params(tmp_path):
    result = _run("compare", tmp_path, generate="synthetic", n=20, m=6, p=4, omit_timing=True)
    assert result.payload["methods"][0] == "GSOR"
    assert "Uzawa" in result.payload["methods"]


def test_export_then_import(tmp_path):
    exported = _run("export", tmp_path / "bundle", generate="synthetic", n=20, m=6, p=4, seed=7)
    manifest = exported.payload["manifest"]
    assert os.path.basename(manifest) == "manifest.json"
    assert str(tmp_path / "bundle" / "A.mtx") in exported.files

    result = _run("solve", tmp_path / "solved", **{"import": manifest}, solver="gmres")
    assert result.exit_code == ExitCode.OK
    assert result.payload["problem"]["provenance"]["seed"] == 7
    assert result.payload["solution_error"] < 1e-6
