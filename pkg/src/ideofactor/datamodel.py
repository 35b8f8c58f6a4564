"""Input matrices, graph construction, normalization, affinities and Laplacians.

Everything downstream (solver, baselines, scoring) consumes the dense
`entries` arrays held by these containers. Containers are immutable after
construction: the backing arrays are marked read-only so they can be shared
freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InputError

MODE_RETWEET = "retweet-count"
MODE_FOLLOW = "follow-common-neighbors"
MODE_RAW = "raw"
INTERACTION_MODES = (MODE_RETWEET, MODE_FOLLOW, MODE_RAW)

_SYMMETRY_ATOL = 1e-9


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    out.flags.writeable = False
    return out


def _index_ids(ids: Iterable[str]) -> dict[str, int]:
    index: dict[str, int] = {}
    for i in ids:
        if i in index:
            raise InputError(f"duplicate id {i!r}")
        index[i] = len(index)
    return index


@dataclass(frozen=True)
class InteractionMatrix:
    """Weighted user-user matrix A; row u, col v = interaction strength u -> v."""

    entries: np.ndarray
    mode: str
    user_ids: tuple[str, ...]

    def __post_init__(self):
        entries = _freeze(self.entries)
        object.__setattr__(self, "entries", entries)
        n = entries.shape[0]
        if entries.ndim != 2 or entries.shape != (n, n):
            raise InputError(f"interaction matrix must be square, got {entries.shape}")
        if len(self.user_ids) != n:
            raise InputError("user_ids must align with matrix rows")
        if self.mode not in INTERACTION_MODES:
            raise InputError(f"unknown interaction mode {self.mode!r}")
        if np.any(entries < 0):
            raise InputError("interaction weights must be non-negative")
        if np.any(np.diagonal(entries) != 0):
            raise InputError("interaction diagonal must be zero")
        if self.mode == MODE_FOLLOW and not np.array_equal(entries, entries.T):
            raise InputError("common-neighbor interaction matrix must be symmetric")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def to_sparse(self) -> sp.csr_matrix:
        """Sparse view for storage/transport; compute paths stay dense."""
        return sp.csr_matrix(self.entries)

    @classmethod
    def from_sparse(cls, matrix, mode: str, user_ids: Sequence[str]) -> "InteractionMatrix":
        return cls(entries=np.asarray(matrix.todense()), mode=mode, user_ids=tuple(user_ids))


@dataclass(frozen=True)
class EngagementMatrix:
    """Non-negative user-source count matrix C; (u, s) = times u shared s."""

    entries: np.ndarray
    user_ids: tuple[str, ...]
    source_ids: tuple[str, ...]

    def __post_init__(self):
        entries = _freeze(self.entries)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2:
            raise InputError("engagement matrix must be 2-D")
        n, m = entries.shape
        if n < 1 or m < 1:
            raise InputError("engagement matrix needs at least one user and one source")
        if len(self.user_ids) != n or len(self.source_ids) != m:
            raise InputError("ids must align with matrix rows/columns")
        _index_ids(self.user_ids)
        _index_ids(self.source_ids)
        if np.any(entries < 0):
            raise InputError("engagement counts must be non-negative")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]

    def to_sparse(self) -> sp.csr_matrix:
        return sp.csr_matrix(self.entries)

    @classmethod
    def from_sparse(cls, matrix, user_ids, source_ids) -> "EngagementMatrix":
        return cls(np.asarray(matrix.todense()), tuple(user_ids), tuple(source_ids))


@dataclass(frozen=True)
class AffinityMatrix:
    """Pairwise cosine similarities of the rows or columns of a data matrix."""

    entries: np.ndarray
    axis: str  # "rows" | "columns"

    def __post_init__(self):
        object.__setattr__(self, "entries", _freeze(self.entries))
        if self.axis not in ("rows", "columns"):
            raise InputError(f"affinity axis must be 'rows' or 'columns', got {self.axis!r}")

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class LaplacianMatrix:
    """L = D - W for a symmetric affinity W, with D = diag(row sums of W)."""

    entries: np.ndarray
    degree: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", _freeze(self.entries))
        object.__setattr__(self, "degree", _freeze(self.degree))

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def build_interaction_matrix(
    edges: Iterable[tuple[str, str, float]],
    mode: str,
    users: Sequence[str] | None = None,
) -> InteractionMatrix:
    """Assemble the user-user matrix from raw edge records.

    retweet-count / raw: entry (u, v) is the summed weight of u -> v edges.
    follow-common-neighbors: edges are follow records (user -> followee);
    entry (u, v) counts followees shared by u and v, which is symmetric.
    Followees live in their own namespace and never become matrix rows.

    When `users` fixes the universe, unseen ids are rejected; otherwise ids
    are indexed in order of first appearance. Duplicate edges are summed.
    The diagonal is forced to zero in every mode.
    """
    if mode not in INTERACTION_MODES:
        raise InputError(f"unknown interaction mode {mode!r}")
    edges = list(edges)
    for src, dst, w in edges:
        if w < 0:
            raise InputError(f"negative edge weight {w!r} on ({src!r}, {dst!r})")

    fixed = users is not None
    if fixed:
        index = _index_ids(users)
    else:
        index = {}
        for src, dst, _ in edges:
            index.setdefault(src, len(index))
            if mode != MODE_FOLLOW:
                index.setdefault(dst, len(index))

    def resolve(uid: str) -> int:
        if uid not in index:
            raise InputError(f"unknown user id {uid!r} outside the declared universe")
        return index[uid]

    n = len(index)
    ids = tuple(index)
    if mode == MODE_FOLLOW:
        # weight > 0 marks membership in the followee set; counts come from
        # set intersections, not from the raw weights.
        followees: list[set[str]] = [set() for _ in range(n)]
        for src, dst, w in edges:
            if w > 0:
                followees[resolve(src)].add(dst)
        A = np.zeros((n, n))
        for u in range(n):
            for v in range(u + 1, n):
                common = len(followees[u] & followees[v])
                A[u, v] = A[v, u] = common
    else:
        A = np.zeros((n, n))
        for src, dst, w in edges:
            A[resolve(src), resolve(dst)] += w
        np.fill_diagonal(A, 0.0)
    return InteractionMatrix(entries=A, mode=mode, user_ids=ids)


def build_engagement_matrix(
    records: Iterable[tuple[str, str, float]],
    users: Sequence[str] | None = None,
    sources: Sequence[str] | None = None,
) -> EngagementMatrix:
    """Assemble the user-source count matrix; duplicate records are summed."""
    records = list(records)
    for user, source, count in records:
        if count < 0:
            raise InputError(f"negative engagement count {count!r} on ({user!r}, {source!r})")

    if users is not None:
        uindex = _index_ids(users)
    else:
        uindex = {}
        for user, _, _ in records:
            uindex.setdefault(user, len(uindex))
    if sources is not None:
        sindex = _index_ids(sources)
    else:
        sindex = {}
        for _, source, _ in records:
            sindex.setdefault(source, len(sindex))

    C = np.zeros((len(uindex), len(sindex)))
    for user, source, count in records:
        if user not in uindex:
            raise InputError(f"unknown user id {user!r} outside the declared universe")
        if source not in sindex:
            raise InputError(f"unknown source id {source!r} outside the declared universe")
        C[uindex[user], sindex[source]] += count
    return EngagementMatrix(entries=C, user_ids=tuple(uindex), source_ids=tuple(sindex))


def row_normalize(X: np.ndarray) -> np.ndarray:
    """Divide each row by its Euclidean norm; all-zero rows pass through."""
    X = np.asarray(X, dtype=np.float64)
    norms = np.sqrt((X * X).sum(axis=1, keepdims=True))
    safe = np.where(norms == 0.0, 1.0, norms)
    return X / safe


def col_normalize(X: np.ndarray) -> np.ndarray:
    """Column-wise analogue of row_normalize."""
    return row_normalize(np.asarray(X, dtype=np.float64).T).T


def _entries(X) -> np.ndarray:
    return X.entries if hasattr(X, "entries") else np.asarray(X, dtype=np.float64)


def affinity_rows(C) -> AffinityMatrix:
    """Cosine similarities of all row pairs: Rn(C) Rn(C)^T."""
    R = row_normalize(_entries(C))
    G = R @ R.T
    G = (G + G.T) / 2.0  # exact symmetry despite BLAS rounding dust
    np.clip(G, -1.0, 1.0, out=G)
    return AffinityMatrix(entries=G, axis="rows")


def affinity_cols(C) -> AffinityMatrix:
    """Cosine similarities of all column pairs: Cn(C)^T Cn(C)."""
    inner = affinity_rows(_entries(C).T)
    return AffinityMatrix(entries=inner.entries, axis="columns")


def laplacian(W) -> LaplacianMatrix:
    """L = D - W with D the diagonal of row sums; rejects asymmetric input."""
    Wd = _entries(W)
    if Wd.ndim != 2 or Wd.shape[0] != Wd.shape[1]:
        raise InputError(f"laplacian input must be square, got {Wd.shape}")
    if not np.allclose(Wd, Wd.T, rtol=0.0, atol=_SYMMETRY_ATOL):
        raise InputError("laplacian input must be symmetric")
    degree = Wd.sum(axis=1)
    L = np.diag(degree) - Wd
    return LaplacianMatrix(entries=L, degree=degree)
