"""Joint factorization of the interaction and engagement matrices.

Solves: minimize ||A - U Hu U^T||^2 + ||C - U Hs V^T||^2
                 + alpha * tr(U^T L_u U) + beta * tr(V^T L_s V)
subject to non-negative factors, with soft orthogonality on U and V
enforced through the Lagrangian terms baked into the update rules.

L_u / L_s default to the Laplacians of the row / column affinities of C;
callers may inject custom affinities. Orthogonality is never enforced by
explicit projection, only through the multiplier split inside the kernels.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, asdict

import numpy as np
import scipy.sparse as sp

from . import kernels
from .datamodel import AffinityMatrix, LaplacianMatrix, affinity_cols, affinity_rows, laplacian
from .errors import InputError, NumericalAbort

logger = logging.getLogger(__name__)

# Relative per-iteration objective increase above this is logged as a warning;
# the update rules embed multiplier terms without a monotonicity guarantee.
_INCREASE_WARN_FRACTION = 0.01


@dataclass(frozen=True)
class SolverConfig:
    k: int = 2
    alpha: float = 0.0
    beta: float = 0.0
    max_iters: int = 500
    rel_tol: float = 1e-6
    seed: int = 0
    eps: float = 1e-12

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        if self.alpha < 0 or self.beta < 0:
            raise InputError("regularization weights must be >= 0")
        if self.max_iters < 1:
            raise InputError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.rel_tol <= 0:
            raise InputError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.eps <= 0:
            raise InputError(f"eps must be > 0, got {self.eps}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SolverConfig":
        return cls(**{k: d[k] for k in ("k", "alpha", "beta", "max_iters", "rel_tol", "seed", "eps") if k in d})


@dataclass
class FactorSet:
    """Latent factors U (n x k), V (m x k), Hu (k x k), Hs (k x k)."""

    U: np.ndarray
    V: np.ndarray
    Hu: np.ndarray
    Hs: np.ndarray

    def __post_init__(self):
        for name in ("U", "V", "Hu", "Hs"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            setattr(self, name, arr)
        n, k = self.U.shape
        m, k2 = self.V.shape
        if k2 != k or self.Hu.shape != (k, k) or self.Hs.shape != (k, k):
            raise InputError("factor shapes are inconsistent")
        for name in ("U", "V", "Hu", "Hs"):
            arr = getattr(self, name)
            if not np.all(np.isfinite(arr)):
                raise InputError(f"{name} contains non-finite entries")
            if np.any(arr < 0):
                raise InputError(f"{name} contains negative entries")

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def m(self) -> int:
        return self.V.shape[0]

    @property
    def k(self) -> int:
        return self.U.shape[1]

    def copy(self) -> "FactorSet":
        return FactorSet(self.U.copy(), self.V.copy(), self.Hu.copy(), self.Hs.copy())


@dataclass
class FitReport:
    objective_trace: np.ndarray
    iterations_run: int
    converged: bool
    final_objective: float
    term_breakdown: dict = field(default_factory=dict)


def as_dense(X) -> np.ndarray:
    """Dense float64 view of a matrix container, ndarray or scipy sparse."""
    if hasattr(X, "entries"):
        X = X.entries
    if sp.issparse(X):
        X = X.toarray()
    return np.ascontiguousarray(X, dtype=np.float64)


def _degree_vector(D) -> np.ndarray:
    if isinstance(D, LaplacianMatrix):
        return np.asarray(D.degree, dtype=np.float64)
    D = np.asarray(D, dtype=np.float64)
    if D.ndim == 2:
        return np.ascontiguousarray(np.diagonal(D))
    return np.ascontiguousarray(D)


def init_factors(n: int, m: int, config: SolverConfig) -> FactorSet:
    """U, V i.i.d. Uniform[0,1) from the seeded generator; Hu = Hs = I."""
    if n < 1 or m < 1:
        raise InputError("need at least one user and one source")
    rng = np.random.default_rng(config.seed)
    U = rng.random((n, config.k))
    V = rng.random((m, config.k))
    I = np.eye(config.k)
    return FactorSet(U=U, V=V, Hu=I, Hs=I.copy())


def objective(A, C, factors: FactorSet, L_u, L_s, alpha: float, beta: float):
    """Objective value and its four-term breakdown."""
    return _objective_raw(
        as_dense(A), as_dense(C), factors.U, factors.V, factors.Hu, factors.Hs,
        as_dense(L_u), as_dense(L_s), float(alpha), float(beta))


def _require_finite(arrs, iteration: int):
    for name, arr in arrs:
        if not np.all(np.isfinite(arr)):
            raise NumericalAbort(iteration, f"non-finite entries in {name}")


def update_u(A, C, factors: FactorSet, S_u, D_u, L_u, alpha: float, eps: float) -> np.ndarray:
    out = kernels.update_joint_row_factor(
        as_dense(A), as_dense(C), factors.U, factors.V, factors.Hu, factors.Hs,
        as_dense(S_u), _degree_vector(D_u), as_dense(L_u), float(alpha), float(eps))
    _require_finite([("U", out)], 0)
    return out


def update_v(C, factors: FactorSet, S_s, D_s, L_s, beta: float, eps: float) -> np.ndarray:
    out = kernels.update_col_factor(
        as_dense(C), factors.U, factors.Hs, factors.V,
        as_dense(S_s), _degree_vector(D_s), as_dense(L_s), float(beta), float(eps))
    _require_finite([("V", out)], 0)
    return out


def update_hu(A, factors: FactorSet, eps: float) -> np.ndarray:
    out = kernels.update_mid_factor_sym(as_dense(A), factors.U, factors.Hu, float(eps))
    _require_finite([("Hu", out)], 0)
    return out


def update_hs(C, factors: FactorSet, eps: float) -> np.ndarray:
    out = kernels.update_mid_factor(as_dense(C), factors.U, factors.Hs, factors.V, float(eps))
    _require_finite([("Hs", out)], 0)
    return out


def fit(A, C, config: SolverConfig, user_affinity: AffinityMatrix | None = None,
        source_affinity: AffinityMatrix | None = None):
    """Run the multiplicative-update loop; returns (FactorSet, FitReport).

    Update order is U, V, Hu, Hs, each seeing the freshest factors. Stops
    when the relative objective change drops below ``config.rel_tol`` or
    after ``config.max_iters`` iterations. Deterministic for a fixed seed.
    """
    Ad = as_dense(A)
    Cd = as_dense(C)
    if Ad.ndim != 2 or Ad.shape[0] != Ad.shape[1]:
        raise InputError(f"interaction matrix must be square, got {Ad.shape}")
    if Cd.ndim != 2 or Cd.shape[0] != Ad.shape[0]:
        raise InputError(f"engagement rows ({Cd.shape}) must match user count ({Ad.shape[0]})")
    n, m = Cd.shape

    S_u = user_affinity if user_affinity is not None else affinity_rows(Cd)
    S_s = source_affinity if source_affinity is not None else affinity_cols(Cd)
    Su = as_dense(S_u)
    Ss = as_dense(S_s)
    if Su.shape != (n, n) or Ss.shape != (m, m):
        raise InputError("affinity shapes do not match the input matrices")
    L_u = laplacian(Su)
    L_s = laplacian(Ss)
    Lu, du = L_u.entries, L_u.degree
    Ls, ds = L_s.entries, L_s.degree

    alpha, beta, eps = float(config.alpha), float(config.beta), float(config.eps)
    f = init_factors(n, m, config)
    U, V, Hu, Hs = f.U, f.V, f.Hu, f.Hs

    total, breakdown = _objective_raw(Ad, Cd, U, V, Hu, Hs, Lu, Ls, alpha, beta)
    trace = [total]
    converged = False
    iterations = 0
    for t in range(1, config.max_iters + 1):
        U = kernels.update_joint_row_factor(Ad, Cd, U, V, Hu, Hs, Su, du, Lu, alpha, eps)
        V = kernels.update_col_factor(Cd, U, Hs, V, Ss, ds, Ls, beta, eps)
        Hu = kernels.update_mid_factor_sym(Ad, U, Hu, eps)
        Hs = kernels.update_mid_factor(Cd, U, Hs, V, eps)
        _require_finite([("U", U), ("V", V), ("Hu", Hu), ("Hs", Hs)], t)

        total, breakdown = _objective_raw(Ad, Cd, U, V, Hu, Hs, Lu, Ls, alpha, beta)
        if not np.isfinite(total):
            raise NumericalAbort(t, "non-finite objective")
        prev = trace[-1]
        if total > prev * (1.0 + _INCREASE_WARN_FRACTION):
            logger.warning("objective increased at iteration %d: %.6g -> %.6g", t, prev, total)
        trace.append(total)
        iterations = t
        if abs(total - prev) / max(prev, eps) < config.rel_tol:
            converged = True
            break

    factors = FactorSet(U=U, V=V, Hu=Hu, Hs=Hs)
    report = FitReport(
        objective_trace=np.asarray(trace),
        iterations_run=iterations,
        converged=converged,
        final_objective=trace[-1],
        term_breakdown=breakdown,
    )
    return factors, report


def _objective_raw(Ad, Cd, U, V, Hu, Hs, Lu, Ls, alpha, beta):
    terms = kernels.joint_objective_terms(Ad, Cd, U, V, Hu, Hs, Lu, Ls, alpha, beta)
    breakdown = {
        "fit_interaction": terms[0],
        "fit_engagement": terms[1],
        "reg_users": terms[2],
        "reg_sources": terms[3],
    }
    return float(sum(terms)), breakdown
