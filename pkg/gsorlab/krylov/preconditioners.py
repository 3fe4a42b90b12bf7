"""
Block preconditioners for the double saddle-point system.

gsor-lower-triangular (symmetric layout)      𝒫 = [A 0 0; B −P/τ 0; C 0 −D/θ]
gsor-lower-triangular (unsymmetric layout)    𝒫̂ = [A 0 0; −B P/τ 0; −C 0 D/θ]
block-diagonal                               diag(A, S, D + C A⁻¹ Cᵀ)
block-triangular                             [A Bᵀ Cᵀ; 0 −S 0; 0 0 −(D + C A⁻¹ Cᵀ)]

with S = B A⁻¹ Bᵀ. The gsor kind costs three SPD solves per application; the
two comparison kinds factorize S and D + C A⁻¹ Cᵀ densely once.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp

from gsorlab.errors import DimensionMismatchError, ParameterError
from gsorlab.linalg.sparse import spmv, to_dense
from gsorlab.problem.model import LAYOUTS, DoubleSaddleProblem

logger = logging.getLogger(__name__)


class PreconditionerKind(str, Enum):
    GSOR = "gsor-lower-triangular"
    BLOCK_DIAGONAL = "block-diagonal"
    BLOCK_TRIANGULAR = "block-triangular"


@dataclass(frozen=True)
class PreconditionerSpec:
    kind: PreconditionerKind
    problem: DoubleSaddleProblem
    tau: float | None = None
    theta: float | None = None
    layout: str = "symmetric"
    schur: object = None
    augmented: object = None

    @property
    def order(self):
        return self.problem.order

    def to_dict(self):
        data = {"kind": self.kind.value, "layout": self.layout}
        if self.kind is PreconditionerKind.GSOR:
            data.update(tau=self.tau, theta=self.theta)
        return data


def build_preconditioner(
    problem: DoubleSaddleProblem, kind, tau=None, theta=None, layout="symmetric"
) -> PreconditionerSpec:
    """
    Builds a preconditioner and caches whatever factorizations it needs.

    Args:
        problem: The problem whose factors of A, P, D are reused.
        kind (PreconditionerKind | str): Which preconditioner.
        tau, theta (float, optional): Required for the gsor kind.
        layout (str): Which system the gsor kind targets; comparison kinds are symmetric only.

    Returns:
        PreconditionerSpec: Immutable, shareable across runs.
    """
    kind = PreconditionerKind(kind)
    if layout not in LAYOUTS:
        raise ParameterError(f"unknown layout {layout!r}")
    if kind is PreconditionerKind.GSOR:
        if tau is None or theta is None or not (tau > 0 and theta > 0):
            raise ParameterError("gsor preconditioner needs tau > 0 and theta > 0")
        return PreconditionerSpec(kind, problem, float(tau), float(theta), layout)

    if layout != "symmetric":
        raise ParameterError(f"{kind.value} preconditioner is defined for the symmetric layout")
    logger.debug("Factorizing dense Schur complements for %s", kind.value)
    return PreconditionerSpec(
        kind,
        problem,
        layout=layout,
        schur=problem.schur_factor,
        augmented=problem.augmented_factor,
    )


def _solve(factor, rhs, counter):
    if counter is not None:
        counter.count += 1
    return factor.solve(rhs)


def apply_preconditioner(spec: PreconditionerSpec, r, counter=None) -> np.ndarray:
    """
    Returns v with (preconditioner) v = r.

    Args:
        spec: The preconditioner.
        r: Vector of the problem's order.
        counter (SolveCounter, optional): Incremented once per SPD solve.
    """
    pb = spec.problem
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (pb.order,):
        raise DimensionMismatchError(f"preconditioner of order {pb.order} got {r.shape}")
    r1, r2, r3 = pb.split(r)
    f = pb.factors

    if spec.kind is PreconditionerKind.GSOR:
        x = _solve(f.a, r1, counter)
        if spec.layout == "symmetric":
            y = spec.tau * _solve(f.p, spmv(pb.B, x) - r2, counter)
            z = spec.theta * _solve(f.d, spmv(pb.C, x) - r3, counter)
        else:
            y = spec.tau * _solve(f.p, r2 + spmv(pb.B, x), counter)
            z = spec.theta * _solve(f.d, r3 + spmv(pb.C, x), counter)
        return np.concatenate([x, y, z])

    if spec.kind is PreconditionerKind.BLOCK_DIAGONAL:
        return np.concatenate(
            [
                _solve(f.a, r1, counter),
                _solve(spec.schur, r2, counter),
                _solve(spec.augmented, r3, counter),
            ]
        )

    z = -_solve(spec.augmented, r3, counter)
    y = -_solve(spec.schur, r2, counter)
    x = _solve(f.a, r1 - spmv(pb.B.T, y) - spmv(pb.C.T, z), counter)
    return np.concatenate([x, y, z])


def dense_preconditioner(spec: PreconditionerSpec) -> np.ndarray:
    """The preconditioner as a dense matrix (desk scale only)."""
    pb = spec.problem
    A, B, C, D, P = pb.A, pb.B, pb.C, pb.D, pb.P
    if spec.kind is PreconditionerKind.GSOR:
        sign = 1.0 if spec.layout == "symmetric" else -1.0
        blocks = [
            [A, None, None],
            [sign * B, -sign * P / spec.tau, None],
            [sign * C, None, -sign * D / spec.theta],
        ]
        return to_dense(sp.bmat(blocks, format="csr"), "preconditioner")

    S = sp.csr_matrix(pb.schur_complement())
    T = sp.csr_matrix(pb.augmented_schur())
    if spec.kind is PreconditionerKind.BLOCK_DIAGONAL:
        blocks = [[A, None, None], [None, S, None], [None, None, T]]
    else:
        blocks = [[A, B.T, C.T], [None, -S, None], [None, None, -T]]
    return to_dense(sp.bmat(blocks, format="csr"), "preconditioner")
