"""Multiplicative-update kernels for the factorization solvers.

These are the hot inner loops: every solver iteration calls a handful of
them on dense float64 arrays. Each kernel is written once as plain numpy
and JIT-compiled with numba unless the ``IDEOFACTOR_BACKEND`` environment
variable selects the pure-numpy path:

    IDEOFACTOR_BACKEND=numba   require numba (ImportError if missing)
    IDEOFACTOR_BACKEND=numpy   force the plain-numpy fallback
    unset / auto               numba when importable, else numpy

All rules share one scheme: a factor F is rescaled elementwise by
``sqrt(num / den)`` where num collects the non-negative attraction terms
plus the negative part of the orthogonality multiplier, den collects the
repulsion terms plus the positive part, and den is floored at ``eps``.
Graph penalties enter through the affinity split L = D - S: the S term
joins num, the D term joins den. Splitting keeps every factor entry
non-negative while leaving fixed points (num == den) untouched.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "IDEOFACTOR_BACKEND"


def _pick_backend() -> str:
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy", ""):
        raise ValueError(f"{_ENV_VAR} must be 'numba', 'numpy' or 'auto', got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _pick_backend()


def _update_joint_row_factor(A, C, U, V, Hu, Hs, Su, du, Lu, alpha, eps):
    """Shared row factor of the joint decomposition A ~ U Hu U^T, C ~ U Hs V^T."""
    UtU = U.T @ U
    VtV = V.T @ V
    AUHt = A @ (U @ Hu.T)
    CVHt = C @ (V @ Hs.T)
    lam = (U.T @ AUHt + U.T @ CVHt - alpha * (U.T @ (Lu @ U))
           - Hu @ UtU @ Hu.T - Hs @ VtV @ Hs.T)
    lam_pos = np.where(lam > 0.0, lam, 0.0)
    lam_neg = np.where(lam < 0.0, -lam, 0.0)
    num = AUHt + CVHt + alpha * (Su @ U) + U @ lam_neg
    den = (U @ (Hu @ UtU @ Hu.T) + U @ (Hs @ VtV @ Hs.T)
           + alpha * (du.reshape(-1, 1) * U) + U @ lam_pos)
    num = np.where(num > 0.0, num, 0.0)
    den = np.maximum(den, eps)
    return U * np.sqrt(num / den)


def _update_col_factor(X, W, H, Z, Sz, dz, Lz, beta, eps):
    """Column factor Z of X ~ W H Z^T (also the source factor V with X = C)."""
    WtW = W.T @ W
    XtWH = X.T @ (W @ H)
    lam = Z.T @ XtWH - beta * (Z.T @ (Lz @ Z)) - H @ WtW @ H
    lam_pos = np.where(lam > 0.0, lam, 0.0)
    lam_neg = np.where(lam < 0.0, -lam, 0.0)
    num = XtWH + beta * (Sz @ Z) + Z @ lam_neg
    den = (beta * (dz.reshape(-1, 1) * Z) + Z @ (H @ WtW @ H) + Z @ lam_pos)
    num = np.where(num > 0.0, num, 0.0)
    den = np.maximum(den, eps)
    return Z * np.sqrt(num / den)


def _update_row_factor(X, W, H, Z, Sw, dw, Lw, alpha, eps):
    """Row factor W of the plain tri-factorization X ~ W H Z^T."""
    ZtZ = Z.T @ Z
    XZHt = X @ (Z @ H.T)
    lam = W.T @ XZHt - alpha * (W.T @ (Lw @ W)) - H @ ZtZ @ H.T
    lam_pos = np.where(lam > 0.0, lam, 0.0)
    lam_neg = np.where(lam < 0.0, -lam, 0.0)
    num = XZHt + alpha * (Sw @ W) + W @ lam_neg
    den = (W @ (H @ ZtZ @ H.T) + alpha * (dw.reshape(-1, 1) * W) + W @ lam_pos)
    num = np.where(num > 0.0, num, 0.0)
    den = np.maximum(den, eps)
    return W * np.sqrt(num / den)


def _update_sym_factor(X, W, H, eps):
    """Factor W of the symmetric decomposition X ~ W H W^T."""
    WtW = W.T @ W
    XWHt = X @ (W @ H.T)
    lam = W.T @ XWHt - H @ WtW @ H.T
    lam_pos = np.where(lam > 0.0, lam, 0.0)
    lam_neg = np.where(lam < 0.0, -lam, 0.0)
    num = XWHt + W @ lam_neg
    den = W @ (H @ WtW @ H.T) + W @ lam_pos
    num = np.where(num > 0.0, num, 0.0)
    den = np.maximum(den, eps)
    return W * np.sqrt(num / den)


def _update_mid_factor(X, W, H, Z, eps):
    """Association factor H of X ~ W H Z^T: H *= sqrt(W^T X Z / W^T W H Z^T Z)."""
    num = W.T @ X @ Z
    den = (W.T @ W) @ H @ (Z.T @ Z)
    num = np.where(num > 0.0, num, 0.0)
    den = np.maximum(den, eps)
    return H * np.sqrt(num / den)


def _update_mid_factor_sym(X, W, H, eps):
    """Association factor H of X ~ W H W^T: H *= sqrt(W^T X W / W^T W H W^T W)."""
    num = W.T @ X @ W
    den = (W.T @ W) @ H @ (W.T @ W)
    num = np.where(num > 0.0, num, 0.0)
    den = np.maximum(den, eps)
    return H * np.sqrt(num / den)


def _joint_objective_terms(A, C, U, V, Hu, Hs, Lu, Ls, alpha, beta):
    """The four objective terms: two Frobenius fits, two weighted graph penalties."""
    Ra = A - U @ Hu @ U.T
    Rc = C - U @ Hs @ V.T
    fit_a = (Ra * Ra).sum()
    fit_c = (Rc * Rc).sum()
    reg_u = alpha * (U * (Lu @ U)).sum()
    reg_v = beta * (V * (Ls @ V)).sum()
    return fit_a, fit_c, reg_u, reg_v


def _tri_objective_terms(X, W, H, Z, Lw, Lz, alpha, beta):
    R = X - W @ H @ Z.T
    fit = (R * R).sum()
    reg_w = alpha * (W * (Lw @ W)).sum()
    reg_z = beta * (Z * (Lz @ Z)).sum()
    return fit, reg_w, reg_z


def _sym_objective_value(X, W, H):
    R = X - W @ H @ W.T
    return (R * R).sum()


NUMPY_IMPLS = {
    "update_joint_row_factor": _update_joint_row_factor,
    "update_col_factor": _update_col_factor,
    "update_row_factor": _update_row_factor,
    "update_sym_factor": _update_sym_factor,
    "update_mid_factor": _update_mid_factor,
    "update_mid_factor_sym": _update_mid_factor_sym,
    "joint_objective_terms": _joint_objective_terms,
    "tri_objective_terms": _tri_objective_terms,
    "sym_objective_value": _sym_objective_value,
}


def jit_compile(impls=NUMPY_IMPLS):
    """Wrap the plain-numpy kernels with numba; exposed for the benchmark."""
    from numba import njit

    # fastmath stays off: traces must be bitwise-reproducible per platform.
    return {name: njit(cache=True, fastmath=False)(fn) for name, fn in impls.items()}


if BACKEND == "numba":
    _ACTIVE = jit_compile()
else:
    _ACTIVE = dict(NUMPY_IMPLS)

update_joint_row_factor = _ACTIVE["update_joint_row_factor"]
update_col_factor = _ACTIVE["update_col_factor"]
update_row_factor = _ACTIVE["update_row_factor"]
update_sym_factor = _ACTIVE["update_sym_factor"]
update_mid_factor = _ACTIVE["update_mid_factor"]
update_mid_factor_sym = _ACTIVE["update_mid_factor_sym"]
joint_objective_terms = _ACTIVE["joint_objective_terms"]
tri_objective_terms = _ACTIVE["tri_objective_terms"]
sym_objective_value = _ACTIVE["sym_objective_value"]
