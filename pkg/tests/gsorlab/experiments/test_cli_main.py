import json

import pytest

from gsorlab.cli import main
from gsorlab.linalg.matrix_market import write_matrix
from gsorlab.problem.io import export_mm


@pytest.fixture
def run_cli(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        code = main(list(argv))
        out = capsys.readouterr().out
        return code, (json.loads(out) if out.strip() else None)

    return _run


def test_solve_success(run_cli, tmp_path):
    code, result = run_cli(
        "solve", "--generate", "lc-like", "--N", "3", "--preset", "auto", "--omit-timing",
        "--out", str(tmp_path / "out"),
    )
    assert code == 0
    assert result["exit_code"] == 0
    assert result["payload"]["status"] == "converged"
    assert (tmp_path / "out" / "solve_gsor.json").exists()


def test_diverged_exit_code(run_cli):
    code, result = run_cli(
        "solve", "--generate", "darcy-like", "--N", "2", "--solver", "uzawa", "--tau", "1",
        "--max-iter", "50000",
    )
    assert code == 3
    assert result["payload"]["status"] == "diverged"


def test_config_error_exit_code(run_cli):
    code, result = run_cli("solve", "--generate", "lc-like")
    assert code == 4
    assert result is None


def test_numeric_failure_exit_code(run_cli, tmp_path, scalar_problem):
    bundle = tmp_path / "bundle"
    manifest = export_mm(scalar_problem, str(bundle))
    write_matrix(str(bundle / "A.mtx"), [[-2.0]])
    code, _ = run_cli("solve", "--import", manifest, "--solver", "gbsor")
    assert code == 5


def test_dry_run(run_cli, tmp_path):
    code, result = run_cli(
        "region", "--generate", "lc-like", "--grid", "omega:0.1:1:3", "--grid", "tau:0.1:1:3",
        "--theta", "1", "--dry-run", "--out", str(tmp_path / "none"),
    )
    assert code == 0
    assert result["payload"]["status"] == "dry-run"
    assert result["payload"]["config"]["grid"] == ["omega:0.1:1:3", "tau:0.1:1:3"]
    assert not (tmp_path / "none").exists()


def test_flags_override_config_file(run_cli, tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text("generate: lc-like\nN: 5\npreset: auto\nomit-timing: true\n")
    code, result = run_cli("bounds", "--config", str(config), "--N", "2")
    assert code == 0
    assert result["payload"]["problem"]["n"] == 6


def test_plan_subcommand(run_cli, tmp_path):
    plan = tmp_path / "plan.yaml"
    plan.write_text(
        "task: cli\n"
        "steps:\n"
        "  - command: bounds\n"
        "    arguments: {generate: lc-like, N: 3, out: out}\n"
        "    output_var: bounds\n"
    )
    code, context = run_cli("plan", str(plan))
    assert code == 0
    assert context["bounds"]["status"] == "success"

    plan.write_text("task: cli\nsteps:\n  - command: plot\n    output_var: broken\n")
    code, context = run_cli("plan", str(plan))
    assert code == 5
    assert context["broken"]["status"] == "failure"


def test_unknown_plan(run_cli):
    code, _ = run_cli("plan", "no_such_plan")
    assert code == 4


def test_invalid_choice_exits():
    with pytest.raises(SystemExit):
        main(["solve", "--generate", "stokes"])
