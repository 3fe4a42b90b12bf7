"""
Command-line front end.

    gsorlab solve --generate lc-like --N 8 --preset lc-like/GSORb
    gsorlab region --generate darcy-like --grid omega:0.1:1.9:10 --grid tau:0.1:2:10 --theta 1
    gsorlab plan lc_protocol

Every command prints a JSON summary on stdout; logs go to stderr and the log
file. Exit codes: 0 success, 2 max-iter, 3 diverged, 4 config error,
5 numeric failure.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from gsorlab import __version__
from gsorlab.config.logging_config import setup_logging
from gsorlab.errors import (
    ConfigError,
    DenseThresholdError,
    DimensionMismatchError,
    ManifestError,
    NotSymmetricError,
    ParameterError,
)
from gsorlab.experiments.commands import ExitCode, run_command
from gsorlab.experiments.plan_executor import PlanExecutor
from gsorlab.experiments.run_config import (
    COMMANDS,
    PRECONDITIONERS,
    SOLVERS,
    SOURCES,
    build_config,
    load_config_file,
)
from gsorlab.utils.path_helpers import get_sample_plan_file, list_sample_plans

logger = logging.getLogger(__name__)

CONFIG_ERRORS = (ConfigError, ParameterError, ManifestError, DimensionMismatchError, OSError)
NUMERIC_ERRORS = (np.linalg.LinAlgError, DenseThresholdError, NotSymmetricError, FloatingPointError)


def _add_run_arguments(parser):
    source = parser.add_argument_group("problem source")
    source.add_argument("--generate", choices=SOURCES)
    source.add_argument("--import", dest="import_path", metavar="MANIFEST")
    source.add_argument("--seed", type=int)
    source.add_argument("--N", dest="N", type=int, help="size parameter of lc-like/darcy-like")
    source.add_argument("--n", type=int, help="synthetic: size of A")
    source.add_argument("--m", type=int, help="synthetic: rows of B")
    source.add_argument("--p", type=int, help="synthetic: size of D")
    source.add_argument("--shape", help="synthetic spectrum shape")
    source.add_argument("--p-mode", dest="p_mode")
    source.add_argument("--nu-target", dest="nu_target", type=float)

    solver = parser.add_argument_group("solver")
    solver.add_argument("--solver", choices=SOLVERS)
    solver.add_argument("--omega", type=float)
    solver.add_argument("--tau", type=float)
    solver.add_argument("--theta", type=float)
    solver.add_argument("--preset", help='"family/name" or "auto"')
    solver.add_argument("--preconditioner", choices=PRECONDITIONERS)
    solver.add_argument("--layout", choices=("symmetric", "unsymmetric"))
    solver.add_argument("--tol", type=float)
    solver.add_argument("--max-iter", dest="max_iter", type=int)
    solver.add_argument("--restart", type=int)

    scan = parser.add_argument_group("scans")
    scan.add_argument("--grid", action="append", help='"param:lo:hi:steps", repeatable')
    scan.add_argument("--mode", choices=("empirical", "spectral"))
    scan.add_argument("--workers", type=int)

    output = parser.add_argument_group("output")
    output.add_argument("--out", help="output directory")
    output.add_argument("--history", action="store_true", default=None)
    output.add_argument("--omit-timing", dest="omit_timing", action="store_true", default=None)
    output.add_argument("--dry-run", dest="dry_run", action="store_true", default=None)
    output.add_argument("--config", help="YAML or JSON file of defaults; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsorlab",
        description="GSOR iteration and preconditioning for double saddle-point systems.",
    )
    parser.add_argument("--version", action="version", version=f"gsorlab {__version__}")
    parser.add_argument("--log-level", dest="log_level")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _add_run_arguments(sub.add_parser(name))
    plan = sub.add_parser("plan", help="run a YAML experiment plan")
    plan.add_argument("plan", help=f"plan file or bundled plan name ({', '.join(list_sample_plans())})")
    plan.add_argument("--config", help="defaults applied to every step")
    return parser


def _run_plan(args) -> int:
    path = args.plan
    if not os.path.exists(path):
        path = get_sample_plan_file(args.plan)
    if not os.path.exists(path):
        raise ConfigError(f"no plan file or bundled plan named {args.plan!r}")
    defaults = load_config_file(args.config) if args.config else {}
    context = PlanExecutor(defaults).execute_plan_file(path)
    print(json.dumps(context, indent=2, sort_keys=True, default=str))
    failed = any(v.get("status") == "failure" for v in context.values())
    return ExitCode.NUMERIC_FAILURE if failed else ExitCode.OK


def _run(args) -> int:
    if args.command == "plan":
        return _run_plan(args)
    overrides = {
        k: v for k, v in vars(args).items() if k not in ("command", "config", "log_level")
    }
    file_values = load_config_file(args.config) if args.config else {}
    config = build_config(args.command, file_values, overrides)
    result = run_command(config)
    print(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    return result.exit_code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level)
    try:
        return int(_run(args))
    except CONFIG_ERRORS as e:
        logger.error("Configuration error: %s", e)
        return ExitCode.CONFIG_ERROR
    except NUMERIC_ERRORS as e:
        logger.error("Numeric failure: %s", e)
        return ExitCode.NUMERIC_FAILURE


if __name__ == "__main__":
    sys.exit(main())
