"""Single-view comparison methods: symmetric NMF, tri-factorization
co-clustering, its dual-manifold-regularized variant, and the joint solver
without graph regularization.

All methods run the same soft-orthogonality multiplier-split updates as the
joint solver, so their fixed points satisfy the corresponding KKT
conditions and their traces reduce to each other exactly where the
objectives coincide: ``fit_dmcc(alpha=0, beta=0)`` IS ``fit_onmtf`` (one
code path), and ``fit_ifd_ngr`` delegates to the joint solver.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .datamodel import affinity_cols, affinity_rows, laplacian
from .errors import InputError, NumericalAbort
from .solver import SolverConfig, as_dense, fit

METHOD_NMF_SYMM = "nmf-symm"
METHOD_ONMTF = "onmtf"
METHOD_DMCC = "dmcc"
METHOD_IFD_NGR = "ifd-ngr"

_SYMMETRY_ATOL = 1e-9


@dataclass
class BaselineResult:
    method: str
    row_factors: np.ndarray
    col_factors: np.ndarray | None
    mid_factor: np.ndarray | None
    objective_trace: np.ndarray
    iterations_run: int
    converged: bool
    factor_set: object = None  # full FactorSet when the method produces one

    def __post_init__(self):
        for arr in (self.row_factors, self.col_factors, self.mid_factor):
            if arr is not None and (np.any(arr < 0) or not np.all(np.isfinite(arr))):
                raise InputError("baseline factors must be non-negative and finite")


def fit_nmf_symm(X, k: int, config: SolverConfig) -> BaselineResult:
    """Factorize a symmetric non-negative X as W H W^T.

    For source-side clustering callers pass X = C^T C.
    """
    Xd = as_dense(X)
    if Xd.ndim != 2 or Xd.shape[0] != Xd.shape[1]:
        raise InputError(f"symmetric NMF needs a square matrix, got {Xd.shape}")
    if not np.allclose(Xd, Xd.T, rtol=0.0, atol=_SYMMETRY_ATOL):
        raise InputError("symmetric NMF needs a symmetric matrix")
    if np.any(Xd < 0):
        raise InputError("symmetric NMF needs non-negative entries")

    n = Xd.shape[0]
    eps = float(config.eps)
    rng = np.random.default_rng(config.seed)
    W = rng.random((n, k))
    H = np.eye(k)

    trace = [float(kernels.sym_objective_value(Xd, W, H))]
    converged = False
    iterations = 0
    for t in range(1, config.max_iters + 1):
        W = kernels.update_sym_factor(Xd, W, H, eps)
        H = kernels.update_mid_factor_sym(Xd, W, H, eps)
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(H))):
            raise NumericalAbort(t, "non-finite factors in symmetric NMF")
        total = float(kernels.sym_objective_value(Xd, W, H))
        if not np.isfinite(total):
            raise NumericalAbort(t, "non-finite objective in symmetric NMF")
        prev = trace[-1]
        trace.append(total)
        iterations = t
        if abs(total - prev) / max(prev, eps) < config.rel_tol:
            converged = True
            break

    return BaselineResult(
        method=METHOD_NMF_SYMM, row_factors=W, col_factors=None, mid_factor=H,
        objective_trace=np.asarray(trace), iterations_run=iterations, converged=converged)


def fit_onmtf(X, k: int, config: SolverConfig) -> BaselineResult:
    """Bi-orthogonal tri-factorization X ~ W H Z^T; rows cluster by W, columns by Z."""
    return replace(_fit_tri(X, k, 0.0, 0.0, config), method=METHOD_ONMTF)


def fit_dmcc(X, k: int, alpha: float, beta: float, config: SolverConfig) -> BaselineResult:
    """Tri-factorization plus Laplacian penalties on X's row/column manifolds."""
    return _fit_tri(X, k, float(alpha), float(beta), config)


def _fit_tri(X, k, alpha, beta, config: SolverConfig) -> BaselineResult:
    Xd = as_dense(X)
    if Xd.ndim != 2:
        raise InputError("tri-factorization needs a 2-D matrix")
    if np.any(Xd < 0):
        raise InputError("tri-factorization needs non-negative entries")
    n, m = Xd.shape

    Sw = affinity_rows(Xd).entries
    Sz = affinity_cols(Xd).entries
    Lw = laplacian(Sw)
    Lz = laplacian(Sz)

    eps = float(config.eps)
    rng = np.random.default_rng(config.seed)
    W = rng.random((n, k))
    Z = rng.random((m, k))
    H = np.eye(k)

    def total_objective(W, H, Z):
        terms = kernels.tri_objective_terms(Xd, W, H, Z, Lw.entries, Lz.entries, alpha, beta)
        return float(sum(terms))

    trace = [total_objective(W, H, Z)]
    converged = False
    iterations = 0
    for t in range(1, config.max_iters + 1):
        W = kernels.update_row_factor(Xd, W, H, Z, Sw, Lw.degree, Lw.entries, alpha, eps)
        Z = kernels.update_col_factor(Xd, W, H, Z, Sz, Lz.degree, Lz.entries, beta, eps)
        H = kernels.update_mid_factor(Xd, W, H, Z, eps)
        if not all(np.all(np.isfinite(F)) for F in (W, Z, H)):
            raise NumericalAbort(t, "non-finite factors in tri-factorization")
        total = total_objective(W, H, Z)
        if not np.isfinite(total):
            raise NumericalAbort(t, "non-finite objective in tri-factorization")
        prev = trace[-1]
        trace.append(total)
        iterations = t
        if abs(total - prev) / max(prev, eps) < config.rel_tol:
            converged = True
            break

    return BaselineResult(
        method=METHOD_DMCC, row_factors=W, col_factors=Z, mid_factor=H,
        objective_trace=np.asarray(trace), iterations_run=iterations, converged=converged)


def fit_ifd_ngr(A, C, k: int, config: SolverConfig) -> BaselineResult:
    """The joint solver with both graph penalties switched off."""
    cfg = replace(config, k=k, alpha=0.0, beta=0.0)
    factors, report = fit(A, C, cfg)
    return BaselineResult(
        method=METHOD_IFD_NGR, row_factors=factors.U, col_factors=factors.V,
        mid_factor=None, objective_trace=report.objective_trace,
        iterations_run=report.iterations_run, converged=report.converged,
        factor_set=factors)
