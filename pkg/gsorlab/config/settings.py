from dataclasses import dataclass
from functools import lru_cache

from gsorlab.utils.env_helpers import get_env_float, get_env_int, get_env_str


@dataclass(frozen=True)
class Settings:
    # orders above this are never densified for oracle work
    dense_threshold: int = 2000
    symmetry_tol: float = 1e-12
    pivot_tol: float = 1e-14
    eig_tol: float = 1e-10
    eig_max_iter: int = 5000
    # symmetric operators up to this order are materialised for eigvalsh
    dense_probe_limit: int = 300
    divergence_threshold: float = 1e8
    boundary_slack: float = 1e-12
    scan_workers: int = 4
    output_dir: str = "results"
    log_dir: str = "logs"
    log_file: str = "gsorlab.log"
    log_level: str = "INFO"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Reads settings from GSORLAB_* environment variables (and a .env file).

    Returns:
        Settings: The process-wide settings.
    """
    defaults = Settings()
    return Settings(
        dense_threshold=get_env_int("DENSE_THRESHOLD", defaults.dense_threshold),
        symmetry_tol=get_env_float("SYMMETRY_TOL", defaults.symmetry_tol),
        pivot_tol=get_env_float("PIVOT_TOL", defaults.pivot_tol),
        eig_tol=get_env_float("EIG_TOL", defaults.eig_tol),
        eig_max_iter=get_env_int("EIG_MAX_ITER", defaults.eig_max_iter),
        dense_probe_limit=get_env_int(
            "DENSE_PROBE_LIMIT", defaults.dense_probe_limit
        ),
        divergence_threshold=get_env_float(
            "DIVERGENCE_THRESHOLD", defaults.divergence_threshold
        ),
        boundary_slack=get_env_float("BOUNDARY_SLACK", defaults.boundary_slack),
        scan_workers=get_env_int("SCAN_WORKERS", defaults.scan_workers),
        output_dir=get_env_str("OUTPUT_DIR", defaults.output_dir),
        log_dir=get_env_str("LOG_DIR", defaults.log_dir),
        log_file=get_env_str("LOG_FILE", defaults.log_file),
        log_level=get_env_str("LOG_LEVEL", defaults.log_level),
    )
