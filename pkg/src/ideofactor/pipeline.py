"""Orchestration shared by the CLI commands and the HTTP export surface.

Keeping this logic out of cli.py means the recommendation endpoint, the
space exporter and the command-line paths all run the exact same code, so
their outputs agree id-for-id.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .datamodel import EngagementMatrix, build_engagement_matrix
from .errors import (DegenerateSeriesError, InputError, InsufficientOverlapError,
                     UnplaceableError)
from .fileio import FactorBundle
from .metrics import (MI_NORMALIZATION, LabeledPartition, ScoreSeries, adjusted_rand_index,
                      mutual_information_scores, pearson, purity, threshold_labels)
from .recommender import ToleranceBox, fallback_popularity, recommend, user_popularity_position
from .scoring import ScoredEntity, hard_clusters, ideology_score, popularity_score
from . import scoring


def orient_bundle(bundle: FactorBundle, anchors: ScoreSeries | None):
    """Flip the latent axes of a k = 2 bundle against anchor scores.

    The anchor side (users vs sources) is inferred from id overlap; flips
    apply consistently to every factor present, leaving reconstructions
    unchanged. Returns (bundle, report).
    """
    if bundle.k != 2 or anchors is None:
        return bundle, scoring.OrientReport(False, 0, None)

    amap = anchors.as_dict()
    user_overlap = len([i for i in (bundle.user_ids or ()) if i in amap])
    source_overlap = len([i for i in (bundle.source_ids or ()) if i in amap])
    if user_overlap >= source_overlap and user_overlap >= 2 and bundle.U is not None:
        side_rows, side_ids = bundle.U, bundle.user_ids
    elif source_overlap >= 2 and bundle.V is not None:
        side_rows, side_ids = bundle.V, bundle.source_ids
    else:
        return bundle, scoring.OrientReport(False, max(user_overlap, source_overlap), None)

    index = {uid: i for i, uid in enumerate(side_ids)}
    rows = [(index[uid], val) for uid, val in amap.items() if uid in index]
    estimated = np.array([ideology_score(side_rows[i]) for i, _ in rows])
    truth = np.array([val for _, val in rows])
    if np.std(estimated) == 0.0 or np.std(truth) == 0.0:
        return bundle, scoring.OrientReport(False, len(rows), None)
    r = float(np.corrcoef(estimated, truth)[0, 1])
    if r >= 0:
        return bundle, scoring.OrientReport(False, len(rows), r)

    def flip_cols(F):
        return None if F is None else F[:, ::-1].copy()

    def flip_mid(H):
        return None if H is None else H[::-1, ::-1].copy()

    flipped = replace(bundle, U=flip_cols(bundle.U), V=flip_cols(bundle.V),
                      Hu=flip_mid(bundle.Hu), Hs=flip_mid(bundle.Hs))
    return flipped, scoring.OrientReport(True, len(rows), -r)


def score_bundle(bundle: FactorBundle, anchors: ScoreSeries | None = None,
                 normalize: bool = False):
    """ScoredEntity lists for whichever sides the bundle carries."""
    bundle, report = orient_bundle(bundle, anchors)
    users = []
    sources = []
    if bundle.U is not None:
        if bundle.user_ids is None or len(bundle.user_ids) != bundle.U.shape[0]:
            raise InputError("factor document lacks aligned user ids")
        users = scoring.score_matrix(bundle.U, bundle.user_ids, "user", normalize=normalize)
    if bundle.V is not None:
        if bundle.source_ids is None or len(bundle.source_ids) != bundle.V.shape[0]:
            raise InputError("factor document lacks aligned source ids")
        sources = scoring.score_matrix(bundle.V, bundle.source_ids, "source", normalize=normalize)
    return users, sources, report


def aligned_engagement(bundle: FactorBundle, records) -> EngagementMatrix:
    """Engagement matrix re-indexed to the bundle's id order."""
    if bundle.user_ids is None or bundle.source_ids is None:
        raise InputError("factor document lacks the ids needed to align engagement data")
    return build_engagement_matrix(records, users=bundle.user_ids, sources=bundle.source_ids)


@dataclass
class SpaceContext:
    """Everything needed to serve the exploration surface for one run."""

    users: list[ScoredEntity]
    sources: list[ScoredEntity]
    engagement: EngagementMatrix

    def user_index(self, user_id: str) -> int:
        for i, u in enumerate(self.users):
            if u.id == user_id:
                return i
        raise InputError(f"unknown user id {user_id!r}")

    def positioned_user(self, user_id: str) -> ScoredEntity:
        """User entity with its popularity replaced by the display position:
        engagement-weighted mean source popularity, median fallback."""
        i = self.user_index(user_id)
        row = self.engagement.entries[i]
        try:
            position = user_popularity_position(row, self.sources)
        except UnplaceableError:
            position = fallback_popularity(self.sources)
        return replace(self.users[i], popularity=position)


def build_space_context(bundle: FactorBundle, records,
                        anchors: ScoreSeries | None = None) -> SpaceContext:
    users, sources, _ = score_bundle(bundle, anchors)
    if not users or not sources:
        raise InputError("space export needs both user and source factors")
    if bundle.k != 2:
        raise InputError("space export needs scalar scores, so k must be 2")
    engagement = aligned_engagement(bundle, records)
    return SpaceContext(users=users, sources=sources, engagement=engagement)


def space_document(ctx: SpaceContext) -> dict:
    users = []
    for i, u in enumerate(ctx.users):
        row = ctx.engagement.entries[i]
        try:
            position = user_popularity_position(row, ctx.sources)
            placed = True
        except UnplaceableError:
            position = fallback_popularity(ctx.sources)
            placed = False
        users.append({
            "id": u.id, "ideology": u.ideology, "popularity": position,
            "cluster": u.cluster, "degenerate": u.degenerate, "placed": placed,
        })
    sources = [{
        "id": s.id, "ideology": s.ideology, "popularity": s.popularity,
        "cluster": s.cluster, "degenerate": s.degenerate,
    } for s in ctx.sources]
    edges = []
    entries = ctx.engagement.entries
    for i, uid in enumerate(ctx.engagement.user_ids):
        for j, sid in enumerate(ctx.engagement.source_ids):
            w = entries[i, j]
            if w > 0:
                edges.append([uid, sid, float(w)])
    return {"users": users, "sources": sources, "edges": edges}


def recommendation_document(ctx: SpaceContext, user_id: str, theta: float, delta: float,
                            count: int, seed: int, exclude_consumed: bool = True) -> dict:
    user = ctx.positioned_user(user_id)
    row = ctx.engagement.entries[ctx.user_index(user_id)]
    box = ToleranceBox(theta=theta, delta=delta)
    items = recommend(user, ctx.sources, box, count,
                      exclude_consumed=exclude_consumed, engagement_row=row, seed=seed)
    return {
        "user_id": user_id,
        "box": {"theta": box.theta, "delta": box.delta},
        "items": [{
            "source_id": r.source_id, "ideology": r.ideology, "popularity": r.popularity,
            "sample_weight": r.sample_weight, "novel": r.novel,
        } for r in items],
    }


def evaluation_report(bundle: FactorBundle, target: str, truth: ScoreSeries,
                      popularity_truth: ScoreSeries | None = None,
                      strict_corr: bool = True) -> dict:
    """Clustering and correlation metrics for one side against ground truth.

    With ``strict_corr`` off, correlation failures (too little overlap, zero
    variance) leave corr fields null instead of raising; clustering metrics
    are unaffected either way.
    """
    if target not in ("users", "sources"):
        raise InputError(f"target must be 'users' or 'sources', got {target!r}")
    bundle, _ = orient_bundle(bundle, truth)
    rows = bundle.U if target == "users" else bundle.V
    ids = bundle.user_ids if target == "users" else bundle.source_ids
    if rows is None or ids is None:
        raise InputError(f"factor document has no {target} side")

    tmap = truth.as_dict()
    shared = [i for i, uid in enumerate(ids) if uid in tmap]
    labels = hard_clusters(rows)
    report = {
        "method": bundle.method,
        "target": target,
        "purity": None, "ari": None, "ami": None, "nmi": None,
        "corr_i": None, "corr_rho": None,
        "coverage": {"total": len(ids), "truth": len(truth.ids), "shared": len(shared)},
        "mi_normalization": MI_NORMALIZATION,
    }
    if shared:
        truth_vals = np.array([tmap[ids[i]] for i in shared])
        pred = LabeledPartition(labels=labels[shared])
        true_part = threshold_labels(ScoreSeries(
            ids=tuple(ids[i] for i in shared), values=truth_vals))
        report["purity"] = purity(pred, true_part)
        report["ari"] = adjusted_rand_index(pred, true_part)
        nmi, ami = mutual_information_scores(pred, true_part)
        report["nmi"] = nmi
        report["ami"] = ami

    if bundle.k == 2:
        try:
            est = ScoreSeries(ids=tuple(ids),
                              values=np.array([ideology_score(r) for r in rows]))
            report["corr_i"] = pearson(est, truth)
            if popularity_truth is not None:
                pop = ScoreSeries(ids=tuple(ids),
                                  values=np.array([popularity_score(r) for r in rows]))
                report["corr_rho"] = pearson(pop, popularity_truth)
        except (InsufficientOverlapError, DegenerateSeriesError):
            if strict_corr:
                raise
    return report
