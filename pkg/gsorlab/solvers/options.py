import math
from dataclasses import dataclass, field
from enum import Enum

from gsorlab.errors import ParameterError


@dataclass(frozen=True)
class GsorParams:
    """Relaxation triple (ω, τ, θ); Ω = diag(ωI_n, τI_m, θI_p) is implied."""

    omega: float
    tau: float
    theta: float

    def __post_init__(self):
        for name in ("omega", "tau", "theta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive and finite, got {value}")

    def to_dict(self):
        return {"omega": self.omega, "tau": self.tau, "theta": self.theta}


@dataclass(frozen=True)
class SolveOptions:
    tol: float = 1e-8
    max_iter: int = 100000
    record_history: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be at least 1, got {self.max_iter}")


class SolveStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITER = "max-iter"
    DIVERGED = "diverged"


@dataclass
class SolveReport:
    """
    Outcome of one solver run.

    ``wall_time`` covers the iteration loop only; ``factor_time`` is the
    one-off factorization cost of the problem's SPD blocks (plus any Schur
    complement the method needs).
    """

    method: str
    status: SolveStatus
    iterations: int
    final_res: float
    history: list[float] | None = None
    wall_time: float = 0.0
    factor_time: float = 0.0
    inner_solves: int = 0
    params: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED

    def to_dict(self, include_timing=True):
        data = {
            "method": self.method,
            "status": self.status.value,
            "Iter": self.iterations,
            "Res": self.final_res,
            "inner_solves": self.inner_solves,
            "params": dict(self.params),
        }
        if include_timing:
            data["CPU"] = self.wall_time
            data["factor_time"] = self.factor_time
        return data
