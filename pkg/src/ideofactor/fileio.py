"""Text formats and JSON documents exchanged between pipeline stages.

Tab-separated inputs (edge lists, follow lists, engagement counts) allow
``#`` comment lines and report malformed rows with their line number.
JSON documents are serialized compactly with a fixed key order so repeated
runs produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError, InputFormatError
from .metrics import ScoreSeries
from .solver import FactorSet, SolverConfig

FACTOR_SCHEMA_KEYS = ("n", "m", "k", "U", "V", "Hu", "Hs", "config", "objective_trace")


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield line_no, line


def _parse_number(path, line_no, token, what):
    try:
        value = float(token)
    except ValueError:
        raise InputFormatError(path, line_no, f"{what} is not a number: {token!r}")
    if not np.isfinite(value):
        raise InputFormatError(path, line_no, f"{what} must be finite: {token!r}")
    return value


def read_edge_file(path) -> list[tuple[str, str, float]]:
    """`src<TAB>dst<TAB>weight` records."""
    edges = []
    for line_no, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 3:
            raise InputFormatError(path, line_no, f"expected 3 tab-separated fields, got {len(parts)}")
        edges.append((parts[0], parts[1], _parse_number(path, line_no, parts[2], "edge weight")))
    return edges


def read_follow_file(path) -> list[tuple[str, str, float]]:
    """`user<TAB>followee` records; weight implicitly 1."""
    edges = []
    for line_no, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise InputFormatError(path, line_no, f"expected 2 tab-separated fields, got {len(parts)}")
        edges.append((parts[0], parts[1], 1.0))
    return edges


def read_engagement_file(path) -> list[tuple[str, str, float]]:
    """`user<TAB>source<TAB>count` records."""
    records = []
    for line_no, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 3:
            raise InputFormatError(path, line_no, f"expected 3 tab-separated fields, got {len(parts)}")
        records.append((parts[0], parts[1], _parse_number(path, line_no, parts[2], "engagement count")))
    return records


def read_score_csv(path) -> ScoreSeries:
    """`id,score` rows; one optional header line is tolerated."""
    ids, values = [], []
    first_data = True
    for line_no, line in _data_lines(path):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise InputFormatError(path, line_no, f"expected 2 comma-separated fields, got {len(parts)}")
        try:
            value = float(parts[1])
        except ValueError:
            if first_data:
                first_data = False
                continue  # header row
            raise InputFormatError(path, line_no, f"score is not a number: {parts[1]!r}")
        first_data = False
        ids.append(parts[0])
        values.append(value)
    try:
        return ScoreSeries(ids=tuple(ids), values=np.asarray(values, dtype=np.float64))
    except InputError as exc:
        raise InputFormatError(path, 0, str(exc))


def write_score_csv(path, series: ScoreSeries) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("id,score\n")
        for uid, val in zip(series.ids, series.values):
            fh.write(f"{uid},{float(val)!r}\n")


def dump_json(document: dict, path) -> None:
    Path(path).write_text(json.dumps(document, separators=(",", ":")) + "\n", encoding="utf-8")


def dump_json_stdout(document: dict) -> None:
    print(json.dumps(document, separators=(",", ":")))


def load_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _matrix_field(arr) -> list | None:
    return None if arr is None else np.asarray(arr, dtype=np.float64).tolist()


@dataclass
class FactorBundle:
    """A factor document as stored on disk; sides may be absent for baselines."""

    method: str
    k: int
    U: np.ndarray | None
    V: np.ndarray | None
    Hu: np.ndarray | None
    Hs: np.ndarray | None
    user_ids: tuple[str, ...] | None
    source_ids: tuple[str, ...] | None
    config: dict
    objective_trace: np.ndarray

    @property
    def n(self) -> int | None:
        return None if self.U is None else self.U.shape[0]

    @property
    def m(self) -> int | None:
        return None if self.V is None else self.V.shape[0]

    def factor_set(self) -> FactorSet:
        if any(x is None for x in (self.U, self.V, self.Hu, self.Hs)):
            raise InputError(f"factor document for method {self.method!r} is not a full joint set")
        return FactorSet(U=self.U, V=self.V, Hu=self.Hu, Hs=self.Hs)


def factor_document(bundle: FactorBundle) -> dict:
    return {
        "n": bundle.n,
        "m": bundle.m,
        "k": bundle.k,
        "U": _matrix_field(bundle.U),
        "V": _matrix_field(bundle.V),
        "Hu": _matrix_field(bundle.Hu),
        "Hs": _matrix_field(bundle.Hs),
        "config": bundle.config,
        "objective_trace": np.asarray(bundle.objective_trace, dtype=np.float64).tolist(),
        "method": bundle.method,
        "user_ids": list(bundle.user_ids) if bundle.user_ids is not None else None,
        "source_ids": list(bundle.source_ids) if bundle.source_ids is not None else None,
    }


def save_factors(path, bundle: FactorBundle) -> None:
    dump_json(factor_document(bundle), path)


def load_factors(path) -> FactorBundle:
    doc = load_json(path)
    missing = [key for key in FACTOR_SCHEMA_KEYS if key not in doc]
    if missing:
        raise InputError(f"factor document {path} lacks keys: {missing}")

    def arr(key):
        return None if doc[key] is None else np.asarray(doc[key], dtype=np.float64)

    return FactorBundle(
        method=doc.get("method", "ifd"),
        k=int(doc["k"]),
        U=arr("U"), V=arr("V"), Hu=arr("Hu"), Hs=arr("Hs"),
        user_ids=tuple(doc["user_ids"]) if doc.get("user_ids") else None,
        source_ids=tuple(doc["source_ids"]) if doc.get("source_ids") else None,
        config=doc["config"],
        objective_trace=np.asarray(doc["objective_trace"], dtype=np.float64),
    )


def bundle_from_fit(method: str, factors: FactorSet, config: SolverConfig,
                    objective_trace, user_ids, source_ids) -> FactorBundle:
    return FactorBundle(
        method=method, k=factors.k,
        U=factors.U, V=factors.V, Hu=factors.Hu, Hs=factors.Hs,
        user_ids=tuple(user_ids) if user_ids is not None else None,
        source_ids=tuple(source_ids) if source_ids is not None else None,
        config=config.to_dict(),
        objective_trace=np.asarray(objective_trace, dtype=np.float64),
    )


def write_id_manifest(path, user_ids, source_ids=None) -> None:
    dump_json({
        "users": list(user_ids) if user_ids is not None else None,
        "sources": list(source_ids) if source_ids is not None else None,
    }, path)


def write_scores_table(path, entities) -> None:
    """`id,kind,ideology,popularity,cluster,degenerate` rows, one per entity."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("id,kind,ideology,popularity,cluster,degenerate\n")
        for e in entities:
            ideo = "" if e.ideology is None else repr(e.ideology)
            pop = "" if e.popularity is None else repr(e.popularity)
            fh.write(f"{e.id},{e.kind},{ideo},{pop},{e.cluster},{str(e.degenerate).lower()}\n")
