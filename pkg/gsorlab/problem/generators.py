"""
Desk-scale problem generators.

``generate_synthetic`` draws random blocks with a prescribed spectral shape;
``generate_structured`` mimics the block dimensions and sparsity of two
application families:

- lc-like: a director field with three components per node (n = 3N,
  m = p = N), tridiagonal A, a unit-vector constraint B, P = B A⁻¹ Bᵀ and
  ν_max tuned to 0.1750.
- darcy-like: a coupled free-flow / porous-medium layout with dimensions
  (2(2N+1)², (N+1)², (2N+1)²), so N = 8 gives (578, 81, 289). C couples only
  to the velocity component that B never sees, and ν_max is tuned to 1.0057.
  The ν_max eigenvector then lies in null(B), which makes GSOR with
  ω = θ = 1 diverge for every τ.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from gsorlab.errors import ParameterError, RankDeficientError
from gsorlab.linalg.cholesky import cholesky_factor
from gsorlab.linalg.eigen import extremal_symmetric_eigenvalue
from gsorlab.linalg.sparse import as_csr, identity, spmv
from gsorlab.problem.model import (
    DoubleSaddleProblem,
    estimate_nu_max,
    mu_operator,
    schur_diagonal,
    schur_matrix,
)

logger = logging.getLogger(__name__)

P_MODES = ("schur", "diagonal", "identity")
FAMILIES = ("lc-like", "darcy-like")

LC_NU_MAX = 0.1750
DARCY_NU_MAX = 1.0057
MAX_RANK_RETRIES = 10


@dataclass(frozen=True)
class SpectrumShape:
    """Eigenvalue ranges of the SPD blocks and fill of the coupling blocks."""

    a_range: tuple[float, float]
    d_range: tuple[float, float]
    b_density: float
    c_density: float


SPECTRUM_SHAPES = {
    "uniform": SpectrumShape((1.0, 4.0), (1.0, 2.0), 0.05, 0.05),
    "clustered": SpectrumShape((0.9, 1.1), (0.9, 1.1), 0.05, 0.05),
    "wide": SpectrumShape((0.01, 10.0), (0.1, 10.0), 0.1, 0.1),
}


def toeplitz_tridiagonal(order, lo, hi):
    """
    Symmetric Toeplitz tridiag(b, a, b) whose eigenvalues
    a + 2b cos(kπ/(order+1)) lie strictly inside (lo, hi).
    """
    if not 0 < lo <= hi:
        raise ParameterError(f"eigenvalue range must satisfy 0 < lo <= hi, got ({lo}, {hi})")
    a = 0.5 * (lo + hi)
    b = -0.25 * (hi - lo)
    off = np.full(order - 1, b)
    return as_csr(sp.diags([off, np.full(order, a), off], [-1, 0, 1]))


def _planted_rhs(A, B, C, D, w):
    n, m = A.shape[0], B.shape[0]
    x, y, z = w[:n], w[n : n + m], w[n + m :]
    f = spmv(A, x) + spmv(B.T, y) + spmv(C.T, z)
    g = spmv(B, x)
    h = spmv(C, x) - spmv(D, z)
    return f, g, h


def _choose_p(B, a_factor, p_mode):
    if p_mode == "schur":
        return as_csr(schur_matrix(B, a_factor))
    if p_mode == "diagonal":
        return as_csr(sp.diags(schur_diagonal(B, a_factor)))
    if p_mode == "identity":
        return identity(B.shape[0])
    raise ParameterError(f"unknown p_mode {p_mode!r}; expected one of {P_MODES}")


def _rescale_nu(C, a_factor, d_factor, target):
    nu, _ = estimate_nu_max(C, a_factor, d_factor)
    if nu == 0.0:
        raise ParameterError("cannot tune nu_max of a zero coupling block C")
    # nu_max is quadratic in C
    return as_csr(C * np.sqrt(target / nu))


def _build(A, B, C, D, P, rng, provenance):
    w = rng.standard_normal(A.shape[0] + B.shape[0] + D.shape[0])
    f, g, h = _planted_rhs(A, B, C, D, w)
    return DoubleSaddleProblem(
        A, B, C, D, f, g, h, P=P, provenance=provenance, solution=w
    )


def _random_b(rng, n, m, density):
    # upper-bidiagonal leading m×m block keeps rank m; fill goes to the other columns
    lead = sp.diags(
        [rng.uniform(0.5, 1.5, m), rng.normal(0.0, 0.5, max(m - 1, 0))], [0, 1], shape=(m, m)
    )
    if n == m:
        return as_csr(lead)
    tail = sp.random(
        m, n - m, density=density, format="csr", random_state=rng, data_rvs=rng.standard_normal
    )
    return as_csr(sp.hstack([lead, tail]))


def generate_synthetic(
    seed,
    n,
    m,
    p,
    shape="uniform",
    p_mode="schur",
    nu_target=None,
) -> DoubleSaddleProblem:
    """
    Random problem with a planted solution.

    Args:
        seed (int): Seed for numpy's default generator; equal seeds give bit-identical problems.
        n, m, p (int): Block sizes, m <= n.
        shape (str | SpectrumShape): Name from SPECTRUM_SHAPES or an explicit shape.
        p_mode (str): "schur" (P = B A⁻¹ Bᵀ), "diagonal" (its diagonal) or "identity".
        nu_target (float, optional): Rescale C so ν_max equals this value.

    Returns:
        DoubleSaddleProblem: Problem whose ``solution`` field holds the planted w*.

    Raises:
        RankDeficientError: If B fails the rank check after 10 draws.
    """
    if not (0 < m <= n and p > 0):
        raise ParameterError(f"need 0 < m <= n and p > 0, got n={n}, m={m}, p={p}")
    if isinstance(shape, str):
        if shape not in SPECTRUM_SHAPES:
            raise ParameterError(f"unknown spectrum shape {shape!r}")
        shape = SPECTRUM_SHAPES[shape]

    rng = np.random.default_rng(seed)
    A = toeplitz_tridiagonal(n, *shape.a_range)
    a_factor = cholesky_factor(A)

    for attempt in range(MAX_RANK_RETRIES):
        B = _random_b(rng, n, m, shape.b_density)
        try:
            P = _choose_p(B, a_factor, p_mode)
            cholesky_factor(P)
            break
        except np.linalg.LinAlgError:
            logger.warning("Rejected B draw %d (rank check)", attempt + 1)
    else:
        raise RankDeficientError(f"no full-rank B after {MAX_RANK_RETRIES} draws")

    C = sp.random(
        p, n, density=shape.c_density, format="csr", random_state=rng, data_rvs=rng.standard_normal
    )
    if C.nnz == 0:
        C = sp.csr_matrix(([1.0], ([0], [0])), shape=(p, n))
    D = toeplitz_tridiagonal(p, *shape.d_range) + sp.diags(
        rng.uniform(0.0, 0.1 * shape.d_range[0], p)
    )
    D = as_csr(D)
    if nu_target is not None:
        C = _rescale_nu(as_csr(C), a_factor, cholesky_factor(D), nu_target)

    provenance = {"family": "synthetic", "seed": seed, "p_mode": p_mode}
    if nu_target is not None:
        provenance["nu_target"] = nu_target
    return _build(A, B, as_csr(C), D, P, rng, provenance)


def _stiffness(order, shift=0.0):
    # 1-D Dirichlet Laplacian on a uniform mesh with order+1 cells
    cells = order + 1
    off = np.full(order - 1, -float(cells))
    main = np.full(order, 2.0 * cells + shift)
    return as_csr(sp.diags([off, main, off], [-1, 0, 1]))


def _lc_like(rng, N):
    n, m, p = 3 * N, N, N
    stiff = _stiffness(N, shift=1.0 / (N + 1))
    w_shift = rng.uniform(0.0, 1.0 / (N + 1), N)
    A = as_csr(sp.block_diag([stiff, stiff, stiff + sp.diags(w_shift)]))

    directors = rng.standard_normal((N, 3))
    directors /= np.linalg.norm(directors, axis=1, keepdims=True)
    rows = np.repeat(np.arange(N), 3)
    cols = (np.arange(N)[:, None] + N * np.arange(3)[None, :]).ravel()
    B = as_csr(sp.csr_matrix((directors.ravel(), (rows, cols)), shape=(m, n)))

    weights = rng.uniform(0.5, 1.5, N)
    Cw = sp.diags([weights, -weights[:-1]], [0, 1], shape=(N, N))
    C = as_csr(sp.hstack([sp.csr_matrix((p, 2 * N)), Cw]))
    D = _stiffness(N)

    a_factor = cholesky_factor(A)
    C = _rescale_nu(C, a_factor, cholesky_factor(D), LC_NU_MAX)
    P = as_csr(schur_matrix(B, a_factor))
    return A, B, C, D, P


def _darcy_like(rng, N):
    q = (2 * N + 1) ** 2
    m = (N + 1) ** 2
    n, p = 2 * q, q
    L = toeplitz_tridiagonal(q, 0.5, 4.5)
    A = as_csr(sp.block_diag([L, L]))

    # B sees only the first velocity component; stride >= 2 keeps the
    # pivot columns i*stride disjoint from the i*stride + 1 fill
    stride = q // m
    pivots = np.arange(m) * stride
    rows = np.concatenate([np.arange(m), np.arange(m)])
    cols = np.concatenate([pivots, pivots + 1])
    vals = np.concatenate([1.0 + rng.uniform(0.0, 0.5, m), -1.0 - rng.uniform(0.0, 0.5, m)])
    B1 = sp.csr_matrix((vals, (rows, cols)), shape=(m, q))
    B = as_csr(sp.hstack([B1, sp.csr_matrix((m, q))]))

    C2 = sp.diags(
        [rng.uniform(0.5, 1.5, q), rng.uniform(-0.5, 0.5, q - 1)], [0, 1], shape=(p, q)
    )
    C = as_csr(sp.hstack([sp.csr_matrix((p, q)), C2]))
    D = toeplitz_tridiagonal(p, 0.5, 2.0)

    a_factor = cholesky_factor(A)
    C = _rescale_nu(C, a_factor, cholesky_factor(D), DARCY_NU_MAX)

    # mass-like P, scaled so that mu_max = 1
    off = np.full(m - 1, 1.0 / 6.0)
    P0 = as_csr(sp.diags([off, np.full(m, 4.0 / 6.0), off], [-1, 0, 1]))
    est = extremal_symmetric_eigenvalue(
        mu_operator(B, a_factor, cholesky_factor(P0)), m, "largest"
    )
    P = as_csr(P0 * est.value)
    return A, B, C, D, P


def structured_dims(N, family):
    """Block sizes (n, m, p) that generate_structured produces for N."""
    if family == "lc-like":
        return 3 * N, N, N
    if family == "darcy-like":
        return 2 * (2 * N + 1) ** 2, (N + 1) ** 2, (2 * N + 1) ** 2
    raise ParameterError(f"unknown family {family!r}; expected one of {FAMILIES}")


def generate_structured(seed, N, family) -> DoubleSaddleProblem:
    """
    Problem with the block layout of one of the application families.

    Args:
        seed (int): Generator seed.
        N (int): Size parameter, at least 2.
        family (str): "lc-like" or "darcy-like".

    Returns:
        DoubleSaddleProblem: With a planted solution and ν_max at the family's target.
    """
    if N < 2:
        raise ParameterError(f"N must be at least 2, got {N}")
    structured_dims(N, family)
    rng = np.random.default_rng(seed)
    if family == "lc-like":
        A, B, C, D, P = _lc_like(rng, N)
    else:
        A, B, C, D, P = _darcy_like(rng, N)
    logger.info("Generated %s problem N=%d dims=%s", family, N, structured_dims(N, family))
    return _build(A, B, C, D, P, rng, {"family": family, "seed": seed, "N": N})
