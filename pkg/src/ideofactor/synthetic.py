"""Planted two-block instances with known labels and continuous leanings.

Stand-in for the unavailable production corpus: a two-community planted
partition drives the user-user matrix, and block-aligned Poisson counts
drive the user-source matrix. Block leaning centers sit at 0.25 / 0.75 so
continuous-score recovery is exercised, not just the binary split.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datamodel import MODE_RAW, EngagementMatrix, InteractionMatrix
from .errors import InputError
from .fileio import write_score_csv
from .metrics import ScoreSeries

_BLOCK_CENTERS = (0.25, 0.75)


@dataclass(frozen=True)
class SyntheticSpec:
    n_users: int = 200
    m_sources: int = 60
    block_fraction: float = 0.5
    p_in: float = 0.10
    p_out: float = 0.01
    lambda_in: float = 3.0
    lambda_out: float = 0.2
    ideology_spread: float = 0.15
    seed: int = 0

    def __post_init__(self):
        if self.n_users < 1 or self.m_sources < 1:
            raise InputError("need at least one user and one source")
        if not 0.0 < self.block_fraction < 1.0:
            raise InputError("block_fraction must lie strictly inside (0, 1)")
        if not 0.0 <= self.p_out <= self.p_in <= 1.0:
            raise InputError("edge probabilities need 0 <= p_out <= p_in <= 1")
        if not 0.0 <= self.lambda_out <= self.lambda_in:
            raise InputError("engagement rates need 0 <= lambda_out <= lambda_in")
        if not 0.0 <= self.ideology_spread < 0.5:
            raise InputError("ideology_spread must lie in [0, 0.5)")


@dataclass(frozen=True)
class SyntheticInstance:
    A: InteractionMatrix
    C: EngagementMatrix
    user_blocks: np.ndarray
    source_blocks: np.ndarray
    user_ideology_true: ScoreSeries
    source_ideology_true: ScoreSeries


def _block_labels(count: int, fraction: float) -> np.ndarray:
    first = int(round(count * fraction))
    first = min(max(first, 1), count - 1) if count > 1 else count
    labels = np.ones(count, dtype=np.int64)
    labels[:first] = 0
    return labels


def generate(spec: SyntheticSpec) -> SyntheticInstance:
    """Draw one instance; identical for identical specs (single seeded stream)."""
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n_users, spec.m_sources

    user_blocks = _block_labels(n, spec.block_fraction)
    source_blocks = _block_labels(m, spec.block_fraction)
    user_ids = tuple(f"u{i:04d}" for i in range(n))
    source_ids = tuple(f"s{j:04d}" for j in range(m))

    centers = np.asarray(_BLOCK_CENTERS)
    user_scores = centers[user_blocks] + rng.uniform(-spec.ideology_spread,
                                                     spec.ideology_spread, size=n)
    source_scores = centers[source_blocks] + rng.uniform(-spec.ideology_spread,
                                                         spec.ideology_spread, size=m)
    np.clip(user_scores, 0.0, 1.0, out=user_scores)
    np.clip(source_scores, 0.0, 1.0, out=source_scores)

    # undirected planted partition on users, weight 1 per edge
    same_user = user_blocks[:, None] == user_blocks[None, :]
    p_edge = np.where(same_user, spec.p_in, spec.p_out)
    draws = rng.random((n, n))
    upper = np.triu(draws < p_edge, k=1)
    A = (upper | upper.T).astype(np.float64)

    # block-aligned Poisson share counts
    aligned = user_blocks[:, None] == source_blocks[None, :]
    lam = np.where(aligned, spec.lambda_in, spec.lambda_out)
    C = rng.poisson(lam).astype(np.float64)

    return SyntheticInstance(
        A=InteractionMatrix(entries=A, mode=MODE_RAW, user_ids=user_ids),
        C=EngagementMatrix(entries=C, user_ids=user_ids, source_ids=source_ids),
        user_blocks=user_blocks,
        source_blocks=source_blocks,
        user_ideology_true=ScoreSeries(ids=user_ids, values=user_scores),
        source_ideology_true=ScoreSeries(ids=source_ids, values=source_scores),
    )


def write_instance(instance: SyntheticInstance, outdir) -> dict[str, str]:
    """Write the instance in the standard pipeline file formats.

    Every nonzero ordered pair of A becomes one edge line, so re-reading the
    edge file in raw mode reproduces the matrix exactly.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "edges": outdir / "edges.tsv",
        "engagement": outdir / "engagement.tsv",
        "user_truth": outdir / "user_truth.csv",
        "source_truth": outdir / "source_truth.csv",
    }

    A, C = instance.A, instance.C
    with open(paths["edges"], "w", encoding="utf-8") as fh:
        fh.write("# src<TAB>dst<TAB>weight\n")
        for i, src in enumerate(A.user_ids):
            for j, dst in enumerate(A.user_ids):
                w = float(A.entries[i, j])
                if w > 0:
                    fh.write(f"{src}\t{dst}\t{w!r}\n")
    with open(paths["engagement"], "w", encoding="utf-8") as fh:
        fh.write("# user<TAB>source<TAB>count\n")
        for i, uid in enumerate(C.user_ids):
            for j, sid in enumerate(C.source_ids):
                w = float(C.entries[i, j])
                if w > 0:
                    fh.write(f"{uid}\t{sid}\t{w!r}\n")
    write_score_csv(paths["user_truth"], instance.user_ideology_true)
    write_score_csv(paths["source_truth"], instance.source_ideology_true)
    return {name: str(p) for name, p in paths.items()}

