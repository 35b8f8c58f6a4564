"""Tolerance-box content recommendation.

Candidates are the sources inside a hard box around the user's position
(half-widths theta on the leaning axis, delta on the popularity axis).
Inside the box each candidate is weighted by the product of two
independent Gaussian densities centered on the user, with sigma =
tolerance * SIGMA_FACTOR, so the box boundary sits two sigmas out.
Draws are without replacement, proportional to the weights, and fully
deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, UnplaceableError
from .scoring import ScoredEntity

# sigma as a fraction of the tolerance half-width; boundary at 2 sigma
SIGMA_FACTOR = 0.5


@dataclass(frozen=True)
class ToleranceBox:
    theta: float  # leaning half-width
    delta: float  # popularity half-width

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.delta)):
            raise InputError("tolerances must be finite")
        if self.theta < 0 or self.delta < 0:
            raise InputError("tolerances must be non-negative")


@dataclass(frozen=True)
class Recommendation:
    source_id: str
    ideology: float
    popularity: float
    sample_weight: float  # selection probability within the candidate set
    novel: bool


def _gauss_factor(distance: float, tolerance: float) -> float:
    """Density of N(0, sigma) at `distance`; a zero tolerance is a point mass."""
    sigma = tolerance * SIGMA_FACTOR
    if sigma == 0.0:
        return 1.0  # only exact matches survive truncation
    z = distance / sigma
    return math.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


def recommend(user: ScoredEntity, sources: Sequence[ScoredEntity], box: ToleranceBox,
              count: int, exclude_consumed: bool = True,
              engagement_row: np.ndarray | None = None, seed: int = 0,
              truncate: bool = True) -> list[Recommendation]:
    """Sample up to `count` sources from the user's tolerance box.

    `engagement_row` aligns with `sources` and drives both the novelty flag
    and the consumed-source exclusion; omitted means no prior engagement.
    With `truncate` off, every source is a candidate and only the Gaussian
    weights shape the draw. Fewer candidates than `count` returns them all
    (still in sampled order).
    """
    if user.ideology is None or user.popularity is None:
        raise InputError(f"user {user.id!r} has no scalar scores (k != 2 fit?)")
    if count < 1:
        raise InputError(f"count must be >= 1, got {count}")
    if engagement_row is not None:
        engagement_row = np.asarray(engagement_row, dtype=np.float64)
        if engagement_row.shape != (len(sources),):
            raise InputError("engagement row must align with the source list")

    candidates: list[tuple[ScoredEntity, float, bool]] = []
    for idx, src in enumerate(sources):
        if src.ideology is None or src.popularity is None:
            raise InputError(f"source {src.id!r} has no scalar scores")
        consumed = engagement_row is not None and engagement_row[idx] > 0
        d_i = abs(src.ideology - user.ideology)
        d_p = abs(src.popularity - user.popularity)
        if truncate and (d_i > box.theta or d_p > box.delta):
            continue
        if exclude_consumed and consumed:
            continue
        weight = _gauss_factor(d_i, box.theta) * _gauss_factor(d_p, box.delta)
        candidates.append((src, weight, not consumed))

    total = sum(w for _, w, _ in candidates)
    if not candidates or total <= 0.0:
        return []

    probs = [w / total for _, w, _ in candidates]
    order = _weighted_draw_order(probs, min(count, len(candidates)), seed)
    return [
        Recommendation(
            source_id=candidates[i][0].id,
            ideology=candidates[i][0].ideology,
            popularity=candidates[i][0].popularity,
            sample_weight=probs[i],
            novel=candidates[i][2],
        )
        for i in order
    ]


def _weighted_draw_order(probs: list[float], draws: int, seed: int) -> list[int]:
    """Sequential weighted sampling without replacement."""
    rng = np.random.default_rng(seed)
    remaining = list(range(len(probs)))
    weights = list(probs)
    order = []
    for _ in range(draws):
        total = sum(weights)
        r = rng.random() * total
        acc = 0.0
        picked = len(remaining) - 1  # guard against fp undershoot
        for pos, w in enumerate(weights):
            acc += w
            if r < acc:
                picked = pos
                break
        order.append(remaining.pop(picked))
        weights.pop(picked)
    return order


def user_popularity_position(engagement_row: np.ndarray,
                             sources: Sequence[ScoredEntity]) -> float:
    """Engagement-weighted mean popularity of the sources the user consumed."""
    engagement_row = np.asarray(engagement_row, dtype=np.float64)
    if engagement_row.shape != (len(sources),):
        raise InputError("engagement row must align with the source list")
    weight = 0.0
    acc = 0.0
    for idx, src in enumerate(sources):
        c = engagement_row[idx]
        if c > 0 and src.popularity is not None:
            weight += c
            acc += c * src.popularity
    if weight == 0.0:
        raise UnplaceableError("user has no scored engagement")
    return acc / weight


def fallback_popularity(sources: Sequence[ScoredEntity]) -> float:
    """Median source popularity, for users recommend/display cannot place."""
    vals = [s.popularity for s in sources if s.popularity is not None]
    if not vals:
        raise UnplaceableError("no scored sources to derive a fallback from")
    return float(np.median(vals))
