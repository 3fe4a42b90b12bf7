"""
Dense iteration operators for analysis at desk scale.

GSOR in affine form is w_{k+1} = 𝒯 w_k + c with

    𝒯 = 𝓛⁻¹ 𝓡,    c = 𝓛⁻¹ Ω (f, −g, −h)
    𝓛 = [A 0 0; −τB P 0; −θC 0 D]
    𝓡 = [(1−ω)A  −ωBᵀ  −ωCᵀ; 0  P  0; 0  0  (1−θ)D]

and equivalently 𝒯 = M⁻¹N for the splitting 𝒜 = M − N with
M = [A/ω 0 0; B −P/τ 0; C 0 −D/θ].
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from gsorlab.errors import ParameterError
from gsorlab.linalg.sparse import as_csr, check_dense_order, to_dense
from gsorlab.problem.model import DoubleSaddleProblem
from gsorlab.solvers.options import GsorParams


def _lower_and_right(problem, params):
    A, B, C, D, P = problem.A, problem.B, problem.C, problem.D, problem.P
    w, t, th = params.omega, params.tau, params.theta
    lower = sp.bmat(
        [[A, None, None], [-t * B, P, None], [-th * C, None, D]], format="csr"
    )
    right = sp.bmat(
        [
            [(1.0 - w) * A, -w * B.T, -w * C.T],
            [None, P, None],
            [None, None, (1.0 - th) * D],
        ],
        format="csr",
    )
    return lower, right


def gsor_iteration_operator(problem: DoubleSaddleProblem, params: GsorParams) -> np.ndarray:
    """Dense 𝒯; refuses problems above the dense threshold."""
    check_dense_order(problem.order, "iteration operator")
    lower, right = _lower_and_right(problem, params)
    return sla.solve(to_dense(lower), to_dense(right), check_finite=False)


def gsor_affine_constant(problem: DoubleSaddleProblem, params: GsorParams) -> np.ndarray:
    check_dense_order(problem.order, "iteration operator")
    lower, _ = _lower_and_right(problem, params)
    scaled = np.concatenate(
        [params.omega * problem.f, -params.tau * problem.g, -params.theta * problem.h]
    )
    return sla.solve(to_dense(lower), scaled, check_finite=False)


@dataclass(frozen=True)
class Splitting:
    M: sp.csr_matrix
    N: sp.csr_matrix

    def dense(self):
        return to_dense(self.M, "splitting M"), to_dense(self.N, "splitting N")

    def iteration_matrix(self) -> np.ndarray:
        m, n = self.dense()
        return sla.solve(m, n, check_finite=False)


def splitting_matrices(problem: DoubleSaddleProblem, params: GsorParams) -> Splitting:
    """M and N with M − N = 𝒜 and M⁻¹N = 𝒯."""
    check_dense_order(problem.order, "splitting")
    A, B, C, D, P = problem.A, problem.B, problem.C, problem.D, problem.P
    w, t, th = params.omega, params.tau, params.theta
    M = sp.bmat(
        [[A / w, None, None], [B, -P / t, None], [C, None, -D / th]], format="csr"
    )
    N = sp.bmat(
        [
            [(1.0 / w - 1.0) * A, -B.T, -C.T],
            [None, -P / t, None],
            [None, None, (1.0 - 1.0 / th) * D],
        ],
        format="csr",
    )
    return Splitting(as_csr(M), as_csr(N))


def gbsor_splitting(problem: DoubleSaddleProblem, omega: float) -> Splitting:
    """M = (1/ω)[A Bᵀ 0; B 0 0; ωC 0 −D] and N = M − 𝒜."""
    if not omega > 0:
        raise ParameterError(f"omega must be positive, got {omega}")
    check_dense_order(problem.order, "splitting")
    A, B, C, D = problem.A, problem.B, problem.C, problem.D
    M = sp.bmat(
        [[A / omega, B.T / omega, None], [B / omega, None, None], [C, None, -D / omega]],
        format="csr",
    )
    return Splitting(as_csr(M), as_csr(M - problem.operator.matrix))


def gbsor_iteration_operator(problem: DoubleSaddleProblem, omega: float) -> np.ndarray:
    return gbsor_splitting(problem, omega).iteration_matrix()
