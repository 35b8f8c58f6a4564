"""External clustering-agreement metrics and score-agreement evaluation.

Purity and the adjusted Rand index are computed with exact integer
arithmetic up to a single final division. Mutual-information scores use
natural logarithms; both normalized and adjusted variants normalize by the
arithmetic mean of the two label entropies, and the adjustment term is the
expected mutual information under the permutation (hypergeometric) model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeriesError, InputError, InsufficientOverlapError

MI_NORMALIZATION = "arithmetic"


@dataclass(frozen=True)
class LabeledPartition:
    """Cluster labels remapped onto dense ids 0..n_clusters-1.

    The remap is order-preserving on label values (sorted-unique ranks), so
    0/1 labelings keep their meaning while gaps are squeezed out.
    """

    labels: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.labels)
        if raw.ndim != 1:
            raise InputError("labels must be a flat sequence")
        if raw.size and not np.issubdtype(raw.dtype, np.integer):
            raise InputError("labels must be integers")
        _, remapped = np.unique(raw, return_inverse=True)
        remapped = remapped.astype(np.int64)
        remapped.flags.writeable = False
        object.__setattr__(self, "labels", remapped)

    @property
    def n_items(self) -> int:
        return self.labels.shape[0]

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1 if self.n_items else 0


@dataclass(frozen=True)
class ScoreSeries:
    """Scores attached to string ids; may cover a subset of the population."""

    ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if len(self.ids) != vals.shape[0]:
            raise InputError("ids and values must align")
        if len(set(self.ids)) != len(self.ids):
            raise InputError("score series ids must be unique")
        if not np.all(np.isfinite(vals)):
            raise InputError("score values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "values", vals)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.ids, self.values.tolist()))


def _contingency(pred: LabeledPartition, truth: LabeledPartition) -> np.ndarray:
    if pred.n_items != truth.n_items:
        raise InputError(f"partition sizes differ: {pred.n_items} vs {truth.n_items}")
    if pred.n_items == 0:
        raise InputError("cannot compare empty partitions")
    table = np.zeros((pred.n_clusters, truth.n_clusters), dtype=np.int64)
    np.add.at(table, (pred.labels, truth.labels), 1)
    return table


def purity(pred: LabeledPartition, truth: LabeledPartition) -> float:
    """Fraction of items whose predicted cluster's majority truth label they carry."""
    table = _contingency(pred, truth)
    return int(table.max(axis=1).sum()) / int(table.sum())


def _comb2(x: int) -> int:
    return x * (x - 1) // 2


def adjusted_rand_index(pred: LabeledPartition, truth: LabeledPartition) -> float:
    """Permutation-model-adjusted Rand index from the contingency table.

    All intermediates are exact integers; the one final division makes the
    result the correctly-rounded float of the rational value.
    """
    table = _contingency(pred, truth)
    n = int(table.sum())
    index = sum(_comb2(int(v)) for v in table.ravel())
    x = sum(_comb2(int(v)) for v in table.sum(axis=1))
    y = sum(_comb2(int(v)) for v in table.sum(axis=0))
    pairs = _comb2(n)
    num = 2 * (index * pairs - x * y)
    den = (x + y) * pairs - 2 * x * y
    if den == 0:
        # both partitions trivial (all-one-cluster or all-singletons): identical
        return 1.0
    return num / den


def _entropy(counts: np.ndarray, n: int) -> float:
    probs = counts[counts > 0] / n
    return float(-(probs * np.log(probs)).sum())


def _mutual_information(table: np.ndarray, n: int) -> float:
    mi = 0.0
    a = table.sum(axis=1)
    b = table.sum(axis=0)
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            nij = int(table[i, j])
            if nij:
                mi += (nij / n) * math.log(n * nij / (int(a[i]) * int(b[j])))
    return mi


def _expected_mutual_information(a: np.ndarray, b: np.ndarray, n: int) -> float:
    """E[MI] over random contingency tables with fixed margins."""
    lg = math.lgamma
    emi = 0.0
    for ai in (int(v) for v in a):
        for bj in (int(v) for v in b):
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            for nij in range(lo, hi + 1):
                log_p = (lg(ai + 1) + lg(bj + 1) + lg(n - ai + 1) + lg(n - bj + 1)
                         - lg(n + 1) - lg(nij + 1) - lg(ai - nij + 1)
                         - lg(bj - nij + 1) - lg(n - ai - bj + nij + 1))
                emi += math.exp(log_p) * (nij / n) * math.log(n * nij / (ai * bj))
    return emi


def mutual_information_scores(pred: LabeledPartition, truth: LabeledPartition):
    """(nmi, ami), both with arithmetic-mean normalization."""
    table = _contingency(pred, truth)
    n = int(table.sum())
    a = table.sum(axis=1)
    b = table.sum(axis=0)
    if table.shape == (1, 1):
        return 1.0, 1.0  # both sides one cluster: agreement is total
    h_pred = _entropy(a, n)
    h_truth = _entropy(b, n)
    mean_h = 0.5 * (h_pred + h_truth)
    mi = _mutual_information(table, n)
    nmi = mi / mean_h if mean_h > 0 else 0.0

    emi = _expected_mutual_information(a, b, n)
    denom = mean_h - emi
    tiny = np.finfo(np.float64).eps
    denom = min(denom, -tiny) if denom < 0 else max(denom, tiny)
    ami = (mi - emi) / denom
    return float(nmi), float(ami)


def pearson(xs: ScoreSeries, ys: ScoreSeries) -> float:
    """Pearson r over the id intersection of the two series."""
    ymap = ys.as_dict()
    paired = [(x, ymap[i]) for i, x in zip(xs.ids, xs.values) if i in ymap]
    if len(paired) < 2:
        raise InsufficientOverlapError(
            f"need at least 2 shared ids for correlation, got {len(paired)}")
    xv = np.array([p[0] for p in paired])
    yv = np.array([p[1] for p in paired])
    xd = xv - xv.mean()
    yd = yv - yv.mean()
    sx = math.sqrt(float(xd @ xd))
    sy = math.sqrt(float(yd @ yd))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateSeriesError("zero variance over the shared ids")
    return float(xd @ yd) / (sx * sy)


def overlap_count(xs: ScoreSeries, ys: ScoreSeries) -> int:
    return len(set(xs.ids) & set(ys.ids))


def threshold_labels(scores: ScoreSeries, threshold: float = 0.5) -> LabeledPartition:
    """Label 0 below the threshold, 1 at or above it; aligned to scores.ids order."""
    return LabeledPartition(labels=(scores.values >= threshold).astype(np.int64))


def avg_content_truth(C, source_scores: ScoreSeries) -> ScoreSeries:
    """Engagement-weighted mean of covered source scores, per user.

    Users with zero engagement on covered sources are left out of the
    returned series.
    """
    entries = C.entries
    smap = source_scores.as_dict()
    covered = [j for j, sid in enumerate(C.source_ids) if sid in smap]
    if not covered:
        return ScoreSeries(ids=(), values=np.zeros(0))
    sub = entries[:, covered]
    svals = np.array([smap[C.source_ids[j]] for j in covered])
    weight_sums = sub.sum(axis=1)
    ids = []
    vals = []
    for i, uid in enumerate(C.user_ids):
        if weight_sums[i] > 0:
            ids.append(uid)
            vals.append(float(sub[i] @ svals) / float(weight_sums[i]))
    return ScoreSeries(ids=tuple(ids), values=np.asarray(vals))
