"""
The double saddle-point problem

    [ A  Bᵀ  Cᵀ ] [x]   [f]
    [ B  0   0  ] [y] = [g]
    [ C  0  -D  ] [z]   [h]

with SPD A (n×n), D (p×p), a full row rank B (m×n), an arbitrary C (p×n) and
the SPD weight P (m×m) used by the y-update. The unsymmetric layout negates
the last two block rows: [A Bᵀ Cᵀ; -B 0 0; -C 0 D] with rhs (f, -g, -h).
"""

import logging
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from gsorlab.config.settings import get_settings
from gsorlab.errors import (
    DimensionMismatchError,
    ParameterError,
    RankDeficientError,
)
from gsorlab.linalg.cholesky import cholesky_factor
from gsorlab.linalg.eigen import extremal_symmetric_eigenvalue
from gsorlab.linalg.sparse import as_csr, check_dense_order, spmv, to_dense

logger = logging.getLogger(__name__)

Layout = Literal["symmetric", "unsymmetric"]
LAYOUTS = ("symmetric", "unsymmetric")


def schur_matrix(B, a_factor) -> np.ndarray:
    """Dense B A⁻¹ Bᵀ (symmetrized), for m within the dense threshold."""
    check_dense_order(B.shape[0], "Schur complement")
    s = B @ a_factor.solve(B.T.toarray())
    s = np.asarray(s)
    return 0.5 * (s + s.T)


def schur_diagonal(B, a_factor) -> np.ndarray:
    """Diagonal of B A⁻¹ Bᵀ by probing one row of B at a time."""
    diag = np.empty(B.shape[0])
    for i in range(B.shape[0]):
        row = B.getrow(i).toarray().ravel()
        diag[i] = row @ a_factor.solve(row)
    return diag


def default_p(B, a_factor):
    """
    P used when none is supplied: B A⁻¹ Bᵀ when it can be formed densely,
    otherwise its diagonal.
    """
    if B.shape[0] <= get_settings().dense_threshold:
        logger.warning("P not supplied; defaulting to the dense B A^-1 B^T")
        return as_csr(schur_matrix(B, a_factor))
    logger.warning("P not supplied; defaulting to the diagonal of B A^-1 B^T")
    return as_csr(sp.diags(schur_diagonal(B, a_factor)))


def mu_operator(B, a_factor, p_factor):
    """v -> L_P⁻¹ B A⁻¹ Bᵀ L_P⁻ᵀ v, symmetric and similar to P⁻¹ B A⁻¹ Bᵀ."""

    def apply(v):
        t = spmv(B.T, p_factor.solve_upper(v))
        return p_factor.solve_lower(spmv(B, a_factor.solve(t)))

    return apply


def nu_operator(C, a_factor, d_factor):
    """v -> L_D⁻¹ C A⁻¹ Cᵀ L_D⁻ᵀ v, similar to D⁻¹ C A⁻¹ Cᵀ."""

    def apply(v):
        t = spmv(C.T, d_factor.solve_upper(v))
        return d_factor.solve_lower(spmv(C, a_factor.solve(t)))

    return apply


def estimate_nu_max(C, a_factor, d_factor):
    if C.nnz == 0:
        return 0.0, True
    est = extremal_symmetric_eigenvalue(
        nu_operator(C, a_factor, d_factor), C.shape[0], "largest"
    )
    return max(est.value, 0.0), est.converged


@dataclass(frozen=True)
class ProblemFactors:
    a: object
    p: object
    d: object
    elapsed: float


@dataclass(frozen=True)
class SpectralData:
    """Extremal eigenvalues that every convergence predicate is written in."""

    mu_min: float
    mu_max: float
    nu_max: float
    converged: bool = True

    def __post_init__(self):
        values = (self.mu_min, self.mu_max, self.nu_max)
        if self.converged and not all(np.isfinite(values)):
            raise ParameterError(f"spectral data must be finite, got {values}")
        if any(v < 0 for v in values if np.isfinite(v)):
            raise ParameterError(f"spectral data must be nonnegative, got {values}")
        if self.mu_max <= 0 and self.converged:
            raise ParameterError("mu_max must be positive")
        if np.isfinite(self.mu_min) and self.mu_min > self.mu_max:
            raise ParameterError(
                f"mu_min {self.mu_min} exceeds mu_max {self.mu_max}"
            )

    def to_dict(self):
        return {
            "mu_min": self.mu_min,
            "mu_max": self.mu_max,
            "nu_max": self.nu_max,
            "converged": self.converged,
        }


@dataclass(frozen=True, eq=False)
class DoubleSaddleProblem:
    """
    Immutable problem instance. Blocks are canonicalized to CSR and the SPD
    factors of A, P and D are formed once at construction, which is also where
    the SPD and rank invariants are checked.

    Args:
        A, B, C, D: The blocks (sparse or dense).
        f, g, h: Right-hand side pieces.
        P (optional): SPD weight for the y-update. Defaults to B A⁻¹ Bᵀ.
        provenance (dict, optional): JSON-able notes on where the problem came from.
        solution (optional): Known exact solution (x, y, z) stacked, when planted.
    """

    A: sp.csr_matrix
    B: sp.csr_matrix
    C: sp.csr_matrix
    D: sp.csr_matrix
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    P: sp.csr_matrix | None = None
    provenance: dict = field(default_factory=dict)
    solution: np.ndarray | None = None
    p_defaulted: bool = field(init=False, default=False)
    factors: ProblemFactors = field(init=False, repr=False, default=None)

    def __post_init__(self):
        for name in ("A", "B", "C", "D"):
            object.__setattr__(self, name, as_csr(getattr(self, name)))
        for name in ("f", "g", "h"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=np.float64).ravel()
            )
        if self.P is not None:
            object.__setattr__(self, "P", as_csr(self.P))
        if self.solution is not None:
            object.__setattr__(
                self, "solution", np.asarray(self.solution, dtype=np.float64).ravel()
            )
        self._check_shapes()

        start = time.perf_counter()
        a = cholesky_factor(self.A)
        if self.P is None:
            object.__setattr__(self, "P", default_p(self.B, a))
            object.__setattr__(self, "p_defaulted", True)
        elif self.P.shape != (self.m, self.m):
            raise DimensionMismatchError(
                f"P must be {self.m}x{self.m}, got {self.P.shape}"
            )
        p = cholesky_factor(self.P)
        d = cholesky_factor(self.D)
        elapsed = time.perf_counter() - start
        object.__setattr__(self, "factors", ProblemFactors(a, p, d, elapsed))
        self._check_rank()
        logger.debug(
            "Problem n=%d m=%d p=%d factorized in %.3es", self.n, self.m, self.p, elapsed
        )

    def _check_shapes(self):
        n, m, p = self.A.shape[0], self.B.shape[0], self.D.shape[0]
        if m == 0 or p == 0:
            raise DimensionMismatchError("all three block rows must be nonempty")
        if m > n:
            raise DimensionMismatchError(f"B has more rows ({m}) than columns ({n})")
        expected = {
            "A": (n, n),
            "B": (m, n),
            "C": (p, n),
            "D": (p, p),
            "f": (n,),
            "g": (m,),
            "h": (p,),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise DimensionMismatchError(
                    f"{name} has shape {getattr(self, name).shape}, expected {shape}"
                )
        if self.solution is not None and self.solution.shape != (n + m + p,):
            raise DimensionMismatchError("planted solution has the wrong length")

    def _check_rank(self):
        settings = get_settings()
        if self.m <= settings.dense_threshold:
            r = sla.qr(to_dense(self.B.T, "B"), mode="r", pivoting=True)[0]
            diag = np.abs(np.diag(r))
            floor = max(self.B.shape) * np.finfo(float).eps * diag[0]
            rank = int(np.sum(diag > floor)) if diag[0] > 0 else 0
        else:
            apply = lambda v: spmv(self.B, self.factors.a.solve(spmv(self.B.T, v)))
            low = extremal_symmetric_eigenvalue(apply, self.m, "smallest")
            high = extremal_symmetric_eigenvalue(apply, self.m, "largest")
            rank = self.m if low.value > settings.pivot_tol * high.value else 0
        if rank < self.m:
            raise RankDeficientError(f"B has rank {rank} < m = {self.m}")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[0]

    @property
    def p(self) -> int:
        return self.D.shape[0]

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.n, self.m, self.p

    @property
    def order(self) -> int:
        return self.n + self.m + self.p

    @property
    def rhs(self) -> np.ndarray:
        return np.concatenate([self.f, self.g, self.h])

    def split(self, w):
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.order,):
            raise DimensionMismatchError(
                f"vector of length {w.shape} does not match order {self.order}"
            )
        n, m = self.n, self.m
        return w[:n], w[n : n + m], w[n + m :]

    @cached_property
    def operator(self):
        return assemble(self, "symmetric")

    @cached_property
    def _schur(self):
        return schur_matrix(self.B, self.factors.a)

    @cached_property
    def _augmented(self):
        check_dense_order(self.p, "augmented Schur complement")
        ainv_ct = self.factors.a.solve(self.C.T.toarray())
        s = self.D.toarray() + np.asarray(self.C @ ainv_ct)
        return 0.5 * (s + s.T)

    def schur_complement(self) -> np.ndarray:
        return self._schur

    def augmented_schur(self) -> np.ndarray:
        return self._augmented

    @cached_property
    def schur_factor(self):
        return cholesky_factor(self._schur)

    @cached_property
    def augmented_factor(self):
        return cholesky_factor(self._augmented)


@dataclass(frozen=True)
class AssembledOperator:
    matrix: sp.csr_matrix
    layout: str

    @property
    def shape(self):
        return self.matrix.shape

    def matvec(self, w):
        return spmv(self.matrix, w)

    def to_dense(self):
        return to_dense(self.matrix, f"{self.layout} operator")


def assemble(problem: DoubleSaddleProblem, layout: Layout = "symmetric"):
    """
    Assembles the 3×3 block matrix.

    Args:
        problem: The problem to assemble.
        layout: "symmetric" for the system as posed, "unsymmetric" for the
            sign-flipped form with positive semidefinite symmetric part.

    Returns:
        AssembledOperator: CSR matrix tagged with its layout.
    """
    if layout not in LAYOUTS:
        raise ParameterError(f"unknown layout {layout!r}")
    sign = 1.0 if layout == "symmetric" else -1.0
    A, B, C, D = problem.A, problem.B, problem.C, problem.D
    matrix = sp.bmat(
        [
            [A, B.T, C.T],
            [sign * B, None, None],
            [sign * C, None, -sign * D],
        ],
        format="csr",
    )
    return AssembledOperator(as_csr(matrix), layout)


def assembled_rhs(problem: DoubleSaddleProblem, layout: Layout = "symmetric"):
    sign = 1.0 if layout == "symmetric" else -1.0
    return np.concatenate([problem.f, sign * problem.g, sign * problem.h])


def relative_residual(problem: DoubleSaddleProblem, w) -> tuple[float, bool]:
    """
    ||b - 𝒜w||₂ / ||b||₂ on the symmetric system.

    Returns:
        tuple: (value, relative). When b = 0 the absolute residual is returned
        and relative is False.
    """
    b = problem.rhs
    r = b - problem.operator.matvec(w)
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return float(np.linalg.norm(r)), False
    return float(np.linalg.norm(r) / b_norm), True


def residual_norm(problem: DoubleSaddleProblem, w) -> float:
    value, relative = relative_residual(problem, w)
    if not relative:
        logger.warning("Right-hand side is zero; reporting the absolute residual")
    return value


def spectral_data(problem: DoubleSaddleProblem) -> SpectralData:
    """
    μ_min, μ_max of P⁻¹ B A⁻¹ Bᵀ and ν_max of D⁻¹ C A⁻¹ Cᵀ, through the
    symmetric similarity transforms with the Cholesky factors of P and D.
    """
    f = problem.factors
    apply_mu = mu_operator(problem.B, f.a, f.p)
    high = extremal_symmetric_eigenvalue(apply_mu, problem.m, "largest")
    low = extremal_symmetric_eigenvalue(apply_mu, problem.m, "smallest")
    nu_max, nu_converged = estimate_nu_max(problem.C, f.a, f.d)

    converged = high.converged and low.converged and nu_converged
    if not converged:
        logger.warning("Spectral data did not fully converge")
    mu_min = min(low.value, high.value) if np.isfinite(low.value) else low.value
    return SpectralData(mu_min, high.value, nu_max, converged)


def spectral_data_dense(problem: DoubleSaddleProblem) -> SpectralData:
    """Dense oracle: generalized eigenproblems S v = μ P v and (C A⁻¹ Cᵀ) v = ν D v."""
    mu = sla.eigh(problem.schur_complement(), to_dense(problem.P, "P"), eigvals_only=True)
    cac = problem.augmented_schur() - to_dense(problem.D, "D")
    nu = sla.eigh(0.5 * (cac + cac.T), to_dense(problem.D, "D"), eigvals_only=True)
    return SpectralData(float(mu[0]), float(mu[-1]), max(float(nu[-1]), 0.0))
