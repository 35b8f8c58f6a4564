"""Latent vectors to scores: continuous leaning, popularity, hard clusters.

For k = 2 a row (x, y) maps to a leaning score atan2(y, x) / (pi/2) in
[0, 1] and a popularity score sqrt(x^2 + y^2). Which axis means "liberal"
is an artifact of initialization, so an explicit orientation step flips
the latent columns against caller-supplied anchor scores when available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError
from .solver import FactorSet

_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class ScoredEntity:
    id: str
    kind: str  # "user" | "source"
    latent: tuple[float, ...]
    ideology: float | None
    popularity: float | None
    cluster: int
    degenerate: bool


def ideology_score(latent) -> float:
    """Normalized angle of a non-negative 2-vector: 0.0 on the x-axis, 1.0 on y.

    The all-zero vector has no angle; it scores 0.5 by convention and is
    flagged degenerate by score_all.
    """
    x, y = _checked_pair(latent)
    if x == 0.0 and y == 0.0:
        return 0.5
    return math.atan2(y, x) / _HALF_PI


def popularity_score(latent) -> float:
    """Euclidean magnitude of the latent vector."""
    x, y = _checked_pair(latent)
    return math.hypot(x, y)


def _checked_pair(latent) -> tuple[float, float]:
    arr = np.asarray(latent, dtype=np.float64).reshape(-1)
    if arr.shape != (2,):
        raise InputError(f"expected a 2-vector, got shape {arr.shape}")
    if arr[0] < 0 or arr[1] < 0:
        raise InputError(f"latent components must be non-negative, got {tuple(arr)}")
    return float(arr[0]), float(arr[1])


def hard_clusters(F: np.ndarray) -> np.ndarray:
    """Per-row argmax labels; ties resolve to the lowest index."""
    F = np.asarray(F, dtype=np.float64)
    if F.ndim != 2:
        raise InputError("factor matrix must be 2-D")
    if np.any(F < 0):
        raise InputError("factor matrix must be non-negative")
    return np.argmax(F, axis=1)


def _score_rows(F: np.ndarray, ids: Sequence[str], kind: str) -> list[ScoredEntity]:
    k = F.shape[1]
    labels = hard_clusters(F)
    out = []
    for i, row in enumerate(F):
        degenerate = not np.any(row > 0)
        if k == 2:
            ideology = ideology_score(row)
            popularity = popularity_score(row)
        else:
            ideology = None
            popularity = None
        out.append(ScoredEntity(
            id=ids[i], kind=kind, latent=tuple(float(v) for v in row),
            ideology=ideology, popularity=popularity,
            cluster=int(labels[i]), degenerate=degenerate))
    return out


def score_matrix(F: np.ndarray, ids: Sequence[str], kind: str,
                 normalize: bool = False) -> list[ScoredEntity]:
    """Score the rows of a single factor matrix (one side of a fit)."""
    F = np.asarray(F, dtype=np.float64)
    if F.ndim != 2:
        raise InputError("factor matrix must be 2-D")
    if len(ids) != F.shape[0]:
        raise InputError(f"{len(ids)} ids for {F.shape[0]} factor rows")
    if kind not in ("user", "source"):
        raise InputError(f"kind must be 'user' or 'source', got {kind!r}")
    if normalize:
        F = _unit_columns(F)
    return _score_rows(F, list(ids), kind)


def score_all(factors: FactorSet, user_ids: Sequence[str], source_ids: Sequence[str],
              normalize: bool = False):
    """One ScoredEntity per row of U and of V.

    k must be 2 for scalar scores; other k produce cluster labels only.
    ``normalize`` rescales each latent column to unit Euclidean norm before
    scoring (off by default: popularity depends on raw magnitude).
    """
    if len(user_ids) != factors.n:
        raise InputError(f"{len(user_ids)} user ids for {factors.n} factor rows")
    if len(source_ids) != factors.m:
        raise InputError(f"{len(source_ids)} source ids for {factors.m} factor rows")
    U, V = factors.U, factors.V
    if normalize:
        U = _unit_columns(U)
        V = _unit_columns(V)
    return _score_rows(U, list(user_ids), "user"), _score_rows(V, list(source_ids), "source")


def _unit_columns(F: np.ndarray) -> np.ndarray:
    norms = np.sqrt((F * F).sum(axis=0, keepdims=True))
    return F / np.where(norms == 0.0, 1.0, norms)


@dataclass(frozen=True)
class OrientReport:
    flipped: bool
    anchor_count: int
    anchor_correlation: float | None  # after any flip; None when undetermined


def orient(factors: FactorSet, user_ids: Sequence[str],
           anchors: Mapping[str, float] | None):
    """Fix the axis orientation of a k = 2 factor set against anchor scores.

    Swaps the two latent columns (consistently across U, V, Hu, Hs, which
    leaves both reconstructions unchanged) whenever the anchors correlate
    negatively with the current leaning scores. Without anchors, or with
    fewer than two usable ones, the orientation is reported as arbitrary.
    """
    if factors.k != 2:
        return factors, OrientReport(flipped=False, anchor_count=0, anchor_correlation=None)
    if not anchors:
        return factors, OrientReport(flipped=False, anchor_count=0, anchor_correlation=None)

    index = {uid: i for i, uid in enumerate(user_ids)}
    rows = [(index[uid], val) for uid, val in anchors.items() if uid in index]
    if len(rows) < 2:
        return factors, OrientReport(flipped=False, anchor_count=len(rows), anchor_correlation=None)

    estimated = np.array([ideology_score(factors.U[i]) for i, _ in rows])
    truth = np.array([val for _, val in rows])
    if np.std(estimated) == 0.0 or np.std(truth) == 0.0:
        return factors, OrientReport(flipped=False, anchor_count=len(rows), anchor_correlation=None)

    r = float(np.corrcoef(estimated, truth)[0, 1])
    if r >= 0:
        return factors, OrientReport(flipped=False, anchor_count=len(rows), anchor_correlation=r)
    flipped = flip_axes(factors)
    return flipped, OrientReport(flipped=True, anchor_count=len(rows), anchor_correlation=-r)


def flip_axes(factors: FactorSet) -> FactorSet:
    """Swap the two latent columns; reconstructions are invariant under this."""
    if factors.k != 2:
        raise InputError("axis flip is defined for k = 2 only")
    return FactorSet(
        U=factors.U[:, ::-1].copy(),
        V=factors.V[:, ::-1].copy(),
        Hu=factors.Hu[::-1, ::-1].copy(),
        Hs=factors.Hs[::-1, ::-1].copy(),
    )
