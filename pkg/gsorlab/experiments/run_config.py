"""
Run configuration shared by the CLI and the plan executor.

A config file (YAML or JSON) supplies defaults; command-line flags or plan
step arguments override it key by key. Keys may use dashes or underscores.
"""

import logging
from dataclasses import asdict, dataclass, field, fields

import yaml

from gsorlab.errors import ConfigError, GsorlabError
from gsorlab.krylov.preconditioners import PreconditionerKind
from gsorlab.problem.generators import P_MODES, SPECTRUM_SHAPES
from gsorlab.problem.model import LAYOUTS
from gsorlab.solvers.options import GsorParams
from gsorlab.solvers.presets import parse_preset
from gsorlab.theory.regions import SCAN_MODES, parse_grid

logger = logging.getLogger(__name__)

COMMANDS = ("solve", "region", "curve", "spectrum", "bounds", "compare", "export")
SOURCES = ("synthetic", "lc-like", "darcy-like")
SOLVERS = ("gsor", "uzawa", "gbsor", "gmres", "minres")
PRECONDITIONERS = tuple(k.value for k in PreconditionerKind) + ("none",)
AUTO_PRESET = "auto"

# flag spellings that differ from the field names
_ALIASES = {"import": "import_path"}

_FLOATS = {"omega", "tau", "theta", "tol", "nu_target"}
_INTS = {"max_iter", "restart", "seed", "N", "n", "m", "p", "workers"}
_BOOLS = {"history", "dry_run", "omit_timing"}


@dataclass
class RunConfig:
    command: str
    generate: str | None = None
    import_path: str | None = None
    solver: str = "gsor"
    omega: float | None = None
    tau: float | None = None
    theta: float | None = None
    preset: str | None = None
    tol: float = 1e-8
    max_iter: int = 100000
    restart: int = 100
    grid: list[str] = field(default_factory=list)
    mode: str = "empirical"
    preconditioner: str = PreconditionerKind.GSOR.value
    layout: str = "symmetric"
    out: str | None = None
    seed: int = 0
    N: int = 4
    n: int = 40
    m: int = 12
    p: int = 8
    shape: str = "uniform"
    p_mode: str = "schur"
    nu_target: float | None = None
    history: bool = False
    workers: int | None = None
    dry_run: bool = False
    omit_timing: bool = False

    def to_dict(self):
        return asdict(self)

    @property
    def gsor_params(self) -> GsorParams | None:
        """Explicit (ω, τ, θ), a named preset, or None when "auto" or incomplete."""
        if self.preset and self.preset != AUTO_PRESET:
            return parse_preset(self.preset)
        if None in (self.omega, self.tau, self.theta):
            return None
        return GsorParams(self.omega, self.tau, self.theta)

    def validate(self):
        """Raises ConfigError naming the first problem found."""
        try:
            self._validate()
        except ConfigError:
            raise
        except GsorlabError as e:
            raise ConfigError(str(e)) from e

    def _validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if (self.generate is None) == (self.import_path is None):
            raise ConfigError("exactly one of generate and import must be given")
        if self.generate is not None and self.generate not in SOURCES:
            raise ConfigError(f"generate must be one of {SOURCES}, got {self.generate!r}")
        if self.solver not in SOLVERS:
            raise ConfigError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        if self.preconditioner not in PRECONDITIONERS:
            raise ConfigError(f"unknown preconditioner {self.preconditioner!r}")
        if self.layout not in LAYOUTS:
            raise ConfigError(f"unknown layout {self.layout!r}")
        if self.mode not in SCAN_MODES:
            raise ConfigError(f"mode must be one of {SCAN_MODES}, got {self.mode!r}")
        if self.shape not in SPECTRUM_SHAPES:
            raise ConfigError(f"unknown spectrum shape {self.shape!r}")
        if self.p_mode not in P_MODES:
            raise ConfigError(f"p_mode must be one of {P_MODES}, got {self.p_mode!r}")
        if not self.tol > 0 or self.max_iter < 1 or self.restart < 1:
            raise ConfigError("tol, max_iter and restart must be positive")

        for name in ("omega", "tau", "theta"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}")

        if self.command == "solve":
            self._validate_solver_params()
        axes = [parse_grid(g) for g in self.grid]
        if self.command == "region":
            if len(axes) != 2:
                raise ConfigError("region needs exactly two grids")
            self._check_fixed_param({a.param for a in axes})
        if self.command == "curve":
            if len(axes) != 1:
                raise ConfigError("curve needs exactly one grid")
            self._check_fixed_param({axes[0].param})

    def _validate_solver_params(self):
        if self.solver == "gsor" and self.gsor_params is None and self.preset != AUTO_PRESET:
            raise ConfigError("gsor needs omega, tau and theta, or a preset")
        if self.solver == "uzawa" and self.tau is None:
            raise ConfigError("uzawa needs tau")
        if self.solver == "minres" and self.preconditioner not in (
            PreconditionerKind.BLOCK_DIAGONAL.value,
            "none",
        ):
            raise ConfigError("minres accepts only the block-diagonal preconditioner")
        if self.solver == "minres" and self.layout != "symmetric":
            raise ConfigError("minres needs the symmetric layout")

    def _check_fixed_param(self, scanned):
        params = self.gsor_params
        for name in ("omega", "tau", "theta"):
            if name in scanned:
                continue
            value = getattr(params, name) if params else getattr(self, name)
            if value is None:
                raise ConfigError(f"{name} is not scanned and has no fixed value")


def normalize_keys(values: dict) -> dict:
    normalized = {}
    for key, value in values.items():
        key = str(key).replace("-", "_")
        normalized[_ALIASES.get(key, key)] = value
    return normalized


def _coerce(name, value):
    # plan placeholders resolve to strings
    if value is None or not isinstance(value, str):
        return value
    try:
        if name in _FLOATS:
            return float(value)
        if name in _INTS:
            return int(value)
    except ValueError as e:
        raise ConfigError(f"{name} must be numeric, got {value!r}") from e
    if name in _BOOLS:
        return value.strip().lower() in ("1", "true", "yes", "on")
    return value


def load_config_file(path) -> dict:
    """
    Reads a YAML or JSON config file into a dict of RunConfig keys.

    Raises:
        ConfigError: File missing, unparsable or not a mapping.
    """
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse config {path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    return normalize_keys(data)


def build_config(command, file_values=None, overrides=None) -> RunConfig:
    """
    Merges file values and overrides (non-None overrides win) into a RunConfig.

    Raises:
        ConfigError: Unknown key or invalid combination.
    """
    merged = dict(file_values or {})
    merged.update({k: v for k, v in normalize_keys(overrides or {}).items() if v is not None})
    merged["command"] = command

    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(merged) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if isinstance(merged.get("grid"), str):
        merged["grid"] = [merged["grid"]]

    config = RunConfig(**{k: _coerce(k, v) for k, v in merged.items()})
    config.validate()
    logger.debug("Run config: %s", config.to_dict())
    return config
