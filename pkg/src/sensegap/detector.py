"""Classify usages as assigned/unassigned by nearest-sense similarity.

A usage counts as unassigned (label 1) when its similarity to the closest
sense vector of its headword falls strictly below the threshold, or when the
headword has no usable sense representation at all. Boundary equality counts
as assigned.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from scipy.stats import rankdata

from .inventory import CompletenessView, STATUS_PARTIAL

ASSIGNED = 0
UNASSIGNED = 1

FLAG_UNREPRESENTABLE = "unrepresentable"


class SimilarityError(ValueError):
    pass


class UnrepresentableHeadword(Exception):
    """No complete sense vector exists for the headword."""


def _as_float64(a, b) -> tuple[np.ndarray, np.ndarray]:
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape or va.ndim != 1:
        raise SimilarityError(f"vectors must share one dimension, got {va.shape} and {vb.shape}")
    return va, vb


def cosine(a, b) -> float:
    va, vb = _as_float64(a, b)
    na = math.sqrt(float(va @ va))
    nb = math.sqrt(float(vb @ vb))
    if na == 0.0 or nb == 0.0:
        raise SimilarityError("cosine similarity is undefined for a zero vector")
    return float(va @ vb) / (na * nb)


def spearman(a, b) -> float:
    """Rank correlation with average ranks on ties."""
    va, vb = _as_float64(a, b)
    if va.size < 2:
        raise SimilarityError("spearman needs at least 2 components")
    ra = rankdata(va, method="average")
    rb = rankdata(vb, method="average")
    da = ra - ra.mean()
    db = rb - rb.mean()
    denom = math.sqrt(float(da @ da) * float(db @ db))
    if denom == 0.0:
        raise SimilarityError("spearman is undefined for a constant vector")
    return float(da @ db) / denom


def similarity_fn(name: str):
    if name == "COS":
        return cosine
    if name == "SPR":
        return spearman
    raise ValueError(f"unknown similarity {name!r}")


def nearest_sense(
    usage_vec,
    sense_vecs: Mapping[str, np.ndarray],
    similarity: str = "COS",
) -> tuple[str, float]:
    """Most similar sense; ties resolve to the smallest sense_id."""
    if not sense_vecs:
        raise UnrepresentableHeadword("no complete sense vectors")
    sim = similarity_fn(similarity)
    best_id = None
    best_sim = -math.inf
    for sense_id in sorted(sense_vecs):
        value = sim(usage_vec, sense_vecs[sense_id])
        if value > best_sim:
            best_id, best_sim = sense_id, value
    return best_id, best_sim


def classify(nearest_similarity: float, threshold: float) -> int:
    """Unassigned iff strictly below the threshold."""
    if not (0.0 <= threshold <= 1.0):
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    return UNASSIGNED if nearest_similarity < threshold else ASSIGNED


@dataclass(frozen=True)
class PredictionRecord:
    usage_id: str
    headword: str
    nearest_sense_id: str | None
    nearest_similarity: float | None
    label: int
    flags: tuple[str, ...] = ()

    @property
    def unrepresentable(self) -> bool:
        return FLAG_UNREPRESENTABLE in self.flags

    def to_dict(self) -> dict:
        return {
            "usage_id": self.usage_id,
            "headword": self.headword,
            "nearest_sense_id": self.nearest_sense_id,
            "nearest_similarity": (
                None if self.nearest_similarity is None else round(self.nearest_similarity, 6)
            ),
            "label": self.label,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PredictionRecord":
        return cls(
            usage_id=d["usage_id"],
            headword=d["headword"],
            nearest_sense_id=d.get("nearest_sense_id"),
            nearest_similarity=d.get("nearest_similarity"),
            label=int(d["label"]),
            flags=tuple(d.get("flags") or ()),
        )


def predict_usage(
    usage_id: str,
    headword: str,
    usage_vec,
    sense_vecs: Mapping[str, np.ndarray],
    similarity: str,
    threshold: float,
) -> PredictionRecord:
    """One usage against all sense vectors of its headword.

    An unrepresentable headword yields an unassigned record flagged as such;
    those predictions exist but carry no evidence, and candidate selection
    drops them.
    """
    if not sense_vecs:
        return PredictionRecord(
            usage_id=usage_id,
            headword=headword,
            nearest_sense_id=None,
            nearest_similarity=None,
            label=UNASSIGNED,
            flags=(FLAG_UNREPRESENTABLE,),
        )
    sense_id, sim = nearest_sense(usage_vec, sense_vecs, similarity)
    return PredictionRecord(
        usage_id=usage_id,
        headword=headword,
        nearest_sense_id=sense_id,
        nearest_similarity=sim,
        label=classify(sim, threshold),
    )


def rank_and_select(
    preds: Iterable[PredictionRecord],
    completeness_view: CompletenessView,
    max_per_headword: int = 8,
    sample_size: int | None = None,
) -> list[PredictionRecord]:
    """Pick review candidates from unassigned predictions.

    Partially complete headwords are excluded (their unassigned predictions
    may just reflect the data gap), flagged unrepresentable records are
    dropped, the rest sort ascending by nearest similarity (least similar
    first) and are scanned top-down with a per-headword cap until
    ``sample_size`` candidates are selected.
    """
    eligible = []
    for p in preds:
        if p.label != UNASSIGNED or p.unrepresentable or p.nearest_similarity is None:
            continue
        if completeness_view.status(p.headword) == STATUS_PARTIAL:
            continue
        eligible.append(p)
    eligible.sort(key=lambda p: (p.nearest_similarity, p.usage_id))
    out: list[PredictionRecord] = []
    per_headword: dict[str, int] = {}
    for p in eligible:
        if sample_size is not None and len(out) >= sample_size:
            break
        seen = per_headword.get(p.headword, 0)
        if seen >= max_per_headword:
            continue
        per_headword[p.headword] = seen + 1
        out.append(p)
    return out


def write_predictions(preds: Iterable[PredictionRecord]) -> str:
    return "".join(
        json.dumps(p.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"
        for p in preds
    )


def load_predictions(raw: str) -> list[PredictionRecord]:
    return [PredictionRecord.from_dict(json.loads(line)) for line in raw.splitlines() if line.strip()]
