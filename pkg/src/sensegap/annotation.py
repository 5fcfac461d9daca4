"""Annotation instances, judgment aggregation, and inter-annotator agreement.

An annotation instance pairs one usage (target marked in its sentence) with
one candidate sense gloss, alongside the full gloss list of the headword.
Annotators answer 1 (gloss fits), 0 (does not fit) or - (cannot say).
Judgments aggregate per instance by strict majority after dropping dashes; a
usage counts as assigned as soon as one of its instances aggregates to 1.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Usage
from .evaluation import GoldAssignment, GoldUsage
from .inventory import SenseInventory

logger = logging.getLogger(__name__)

LABEL_FIT = "1"
LABEL_NO_FIT = "0"
LABEL_DASH = "-"
JUDGMENT_LABELS = (LABEL_NO_FIT, LABEL_FIT, LABEL_DASH)

EXCLUDED = "excluded"
ASSIGNED_USAGE = "assigned"
UNASSIGNED_USAGE = "unassigned"

TARGET_OPEN = "**"
TARGET_CLOSE = "**"


class AnnotationError(Exception):
    pass


@dataclass(frozen=True)
class AnnotationInstance:
    instance_id: str
    usage_id: str
    sense_id: str
    headword: str
    sentence_marked: str
    candidate_gloss: str
    all_glosses: tuple[str, ...]
    corpus_tag: str = ""

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "usage_id": self.usage_id,
            "sense_id": self.sense_id,
            "headword": self.headword,
            "sentence_marked": self.sentence_marked,
            "candidate_gloss": self.candidate_gloss,
            "all_glosses": list(self.all_glosses),
            "corpus_tag": self.corpus_tag,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnnotationInstance":
        return cls(
            instance_id=d["instance_id"],
            usage_id=d["usage_id"],
            sense_id=d["sense_id"],
            headword=d["headword"],
            sentence_marked=d["sentence_marked"],
            candidate_gloss=d["candidate_gloss"],
            all_glosses=tuple(d["all_glosses"]),
            corpus_tag=d.get("corpus_tag", ""),
        )


@dataclass(frozen=True)
class Judgment:
    instance_id: str
    annotator_id: str
    label: str
    comment: str = ""

    def __post_init__(self) -> None:
        if self.label not in JUDGMENT_LABELS:
            raise AnnotationError(f"judgment label must be one of {JUDGMENT_LABELS}, got {self.label!r}")


def mark_target(sentence: str, start: int, end: int) -> str:
    return sentence[:start] + TARGET_OPEN + sentence[start:end] + TARGET_CLOSE + sentence[end:]


def make_instance_id(usage_id: str, sense_id: str) -> str:
    return hashlib.sha256(f"{usage_id}\x1f{sense_id}".encode("utf-8")).hexdigest()[:16]


def generate_instances(
    usages: Iterable[Usage],
    inv: SenseInventory,
    primary_only: bool = False,
) -> list[AnnotationInstance]:
    """One instance per (usage, eligible sense).

    Eligible senses have an effective gloss and, when ``primary_only`` is
    set, belong to a synset whose primary headword is the usage's headword.
    Usages of headwords missing from the inventory are skipped with a warning.
    """
    instances = []
    for usage in usages:
        entry = inv.headwords.get(usage.headword)
        if entry is None:
            logger.warning("usage %s: headword %r not in inventory; skipped", usage.usage_id, usage.headword)
            continue
        eligible = [
            s
            for s in entry.senses
            if s.effective_gloss is not None and (s.is_primary or not primary_only)
        ]
        if not eligible:
            continue
        all_glosses = tuple(s.effective_gloss for s in eligible)
        marked = mark_target(usage.sentence, usage.start, usage.end)
        for sense in eligible:
            instances.append(
                AnnotationInstance(
                    instance_id=make_instance_id(usage.usage_id, sense.sense_id),
                    usage_id=usage.usage_id,
                    sense_id=sense.sense_id,
                    headword=usage.headword,
                    sentence_marked=marked,
                    candidate_gloss=sense.effective_gloss,
                    all_glosses=all_glosses,
                    corpus_tag=usage.corpus_tag,
                )
            )
    return instances


def shuffle_instances(instances: Sequence[AnnotationInstance], rng_seed: int) -> list[AnnotationInstance]:
    """Randomized presentation order for export, reproducible under the seed."""
    out = sorted(instances, key=lambda i: i.instance_id)
    random.Random(rng_seed).shuffle(out)
    return out


def aggregate_majority(labels: Iterable[str]) -> int | None:
    """Strict majority after removing dashes; None means excluded (tie or no
    usable judgments)."""
    counts = Counter(label for label in labels if label != LABEL_DASH)
    for label in counts:
        if label not in (LABEL_FIT, LABEL_NO_FIT):
            raise AnnotationError(f"unexpected judgment label {label!r}")
    ones = counts.get(LABEL_FIT, 0)
    zeros = counts.get(LABEL_NO_FIT, 0)
    if ones > zeros:
        return 1
    if zeros > ones:
        return 0
    return None


def usage_assignment(majorities: Iterable[int | None]) -> str:
    """Assigned iff any instance aggregated to 1; unassigned iff all usable
    instances aggregated to 0; excluded when nothing usable remains."""
    majorities = list(majorities)
    if any(m == 1 for m in majorities):
        return ASSIGNED_USAGE
    usable = [m for m in majorities if m is not None]
    if usable:
        return UNASSIGNED_USAGE
    return EXCLUDED


def group_judgments(judgments: Iterable[Judgment]) -> dict[str, dict[str, str]]:
    """instance_id -> annotator_id -> label; duplicate pairs are an error."""
    grouped: dict[str, dict[str, str]] = {}
    for j in judgments:
        per_instance = grouped.setdefault(j.instance_id, {})
        if j.annotator_id in per_instance:
            raise AnnotationError(f"duplicate judgment for ({j.instance_id}, {j.annotator_id})")
        per_instance[j.annotator_id] = j.label
    return grouped


# ---------------------------------------------------------------------------
# Krippendorff's alpha (nominal scale, coincidence-matrix formulation)


@dataclass(frozen=True)
class AlphaResult:
    value: float
    degenerate: bool
    n_items: int
    n_judgments: int


def krippendorff_alpha(
    judgments: Iterable[Judgment],
    annotators: Sequence[str] | None = None,
    instance_ids: Iterable[str] | None = None,
) -> AlphaResult:
    """Chance-corrected agreement on nominal labels.

    Dashes are removed first; items with fewer than two remaining judgments
    drop out. ``annotators`` restricts to a subset (the pairwise variant),
    ``instance_ids`` slices by item (e.g. one corpus). When every remaining
    judgment carries the same label, expected disagreement is zero and alpha
    is reported as 1.0 with the degenerate flag set.

    Uses the coincidence-matrix formulation, which handles missing judgments:
    each item contributes its ordered label pairs weighted by 1/(m_u - 1),
    and alpha = 1 - D_observed / D_expected.
    """
    keep_instances = set(instance_ids) if instance_ids is not None else None
    keep_annotators = set(annotators) if annotators is not None else None
    units: dict[str, list[str]] = {}
    for j in judgments:
        if j.label == LABEL_DASH:
            continue
        if keep_instances is not None and j.instance_id not in keep_instances:
            continue
        if keep_annotators is not None and j.annotator_id not in keep_annotators:
            continue
        units.setdefault(j.instance_id, []).append(j.label)
    units = {k: v for k, v in units.items() if len(v) >= 2}
    if not units:
        raise AnnotationError("no items with at least two codable judgments")

    coincidence: Counter[tuple[str, str]] = Counter()
    for labels in units.values():
        m = len(labels)
        for i, a in enumerate(labels):
            for k, b in enumerate(labels):
                if i != k:
                    coincidence[(a, b)] += 1.0 / (m - 1)
    categories = sorted({c for pair in coincidence for c in pair})
    n_c = {c: sum(coincidence[(c, k)] for k in categories) for c in categories}
    n_total = sum(n_c.values())
    d_observed = sum(v for (a, b), v in coincidence.items() if a != b) / n_total
    expected_pairs = sum(n_c[a] * n_c[b] for a in categories for b in categories if a != b)
    n_judgments = sum(len(v) for v in units.values())
    if expected_pairs == 0.0:
        return AlphaResult(value=1.0, degenerate=True, n_items=len(units), n_judgments=n_judgments)
    d_expected = expected_pairs / (n_total * (n_total - 1.0))
    value = 1.0 - d_observed / d_expected
    return AlphaResult(value=value, degenerate=False, n_items=len(units), n_judgments=n_judgments)


def pairwise_alphas(judgments: Sequence[Judgment]) -> dict[tuple[str, str], AlphaResult]:
    annotator_ids = sorted({j.annotator_id for j in judgments})
    out = {}
    for i, a in enumerate(annotator_ids):
        for b in annotator_ids[i + 1 :]:
            try:
                out[(a, b)] = krippendorff_alpha(judgments, annotators=[a, b])
            except AnnotationError:
                continue
    return out


# ---------------------------------------------------------------------------
# Reports


@dataclass
class AnnotationSummary:
    """Headline counts of one annotation round."""

    instances: int
    usages: int
    label_dist: dict[str, int]
    excluded_instances: int
    excluded_usages: int
    remaining_usages: int
    assigned: int
    unassigned: int

    @property
    def unassigned_pct(self) -> float | None:
        if self.remaining_usages == 0:
            return None
        return 100.0 * self.unassigned / self.remaining_usages

    def to_dict(self) -> dict:
        return {
            "instances": self.instances,
            "usages": self.usages,
            "label_dist": dict(self.label_dist),
            "excluded_instances": self.excluded_instances,
            "excluded_usages": self.excluded_usages,
            "remaining_usages": self.remaining_usages,
            "assigned": self.assigned,
            "unassigned": self.unassigned,
            "unassigned_pct": self.unassigned_pct,
        }


def summarize(
    instances: Sequence[AnnotationInstance],
    judgments: Sequence[Judgment],
    corpus_tag: str | None = None,
) -> AnnotationSummary:
    """Aggregate judgments into the per-round summary; slice with corpus_tag.

    Every instance participates: one without usable judgments (all dashes, a
    tie, or simply not judged) counts as excluded.
    """
    if corpus_tag is not None:
        instances = [i for i in instances if i.corpus_tag == corpus_tag]
    by_id = {i.instance_id: i for i in instances}
    grouped = group_judgments(j for j in judgments if j.instance_id in by_id)

    label_dist = Counter()
    for labels in grouped.values():
        label_dist.update(labels.values())

    majorities: dict[str, int | None] = {}
    for instance_id in by_id:
        labels = grouped.get(instance_id, {})
        majorities[instance_id] = aggregate_majority(labels.values())
    excluded_instances = sum(1 for m in majorities.values() if m is None)

    per_usage: dict[str, list[int | None]] = {}
    for instance_id, majority in majorities.items():
        per_usage.setdefault(by_id[instance_id].usage_id, []).append(majority)
    statuses = Counter(usage_assignment(ms) for ms in per_usage.values())

    usages = len(per_usage)
    assigned = statuses.get(ASSIGNED_USAGE, 0)
    unassigned = statuses.get(UNASSIGNED_USAGE, 0)
    excluded_usages = statuses.get(EXCLUDED, 0)
    return AnnotationSummary(
        instances=len(by_id),
        usages=usages,
        label_dist={
            LABEL_NO_FIT: label_dist.get(LABEL_NO_FIT, 0),
            LABEL_FIT: label_dist.get(LABEL_FIT, 0),
            LABEL_DASH: label_dist.get(LABEL_DASH, 0),
        },
        excluded_instances=excluded_instances,
        excluded_usages=excluded_usages,
        remaining_usages=usages - excluded_usages,
        assigned=assigned,
        unassigned=unassigned,
    )


def build_gold_assignment(
    instances: Sequence[AnnotationInstance],
    judgments: Sequence[Judgment],
) -> GoldAssignment:
    """Usage -> fitting senses from aggregated judgments.

    Senses whose instance aggregated to 1 form the gold set; usages whose
    instances were all excluded are left out entirely.
    """
    by_id = {i.instance_id: i for i in instances}
    grouped = group_judgments(j for j in judgments if j.instance_id in by_id)
    per_usage: dict[str, dict] = {}
    for instance_id, labels in grouped.items():
        inst = by_id[instance_id]
        info = per_usage.setdefault(inst.usage_id, {"headword": inst.headword, "fits": set(), "usable": 0})
        majority = aggregate_majority(labels.values())
        if majority is not None:
            info["usable"] += 1
            if majority == 1:
                info["fits"].add(inst.sense_id)
    usages = {}
    for usage_id, info in per_usage.items():
        if info["usable"] == 0:
            continue
        usages[usage_id] = GoldUsage(
            usage_id=usage_id,
            headword=info["headword"],
            sense_ids=frozenset(info["fits"]),
        )
    return GoldAssignment(usages)


def write_instances(instances: Iterable[AnnotationInstance]) -> str:
    return "".join(
        json.dumps(i.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"
        for i in instances
    )


def load_instances(raw: str) -> list[AnnotationInstance]:
    return [AnnotationInstance.from_dict(json.loads(line)) for line in raw.splitlines() if line.strip()]


def load_judgments(raw: str, fmt: str = "jsonl") -> tuple[list[Judgment], list[str]]:
    """Parse judgments; returns (judgments, malformed-line descriptions)."""
    judgments = []
    problems = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            if fmt == "jsonl":
                d = json.loads(line)
                j = Judgment(
                    instance_id=d["instance_id"],
                    annotator_id=d["annotator_id"],
                    label=str(d["label"]),
                    comment=d.get("comment") or "",
                )
            elif fmt == "tsv":
                parts = line.split("\t")
                if len(parts) < 3:
                    raise AnnotationError("need at least 3 tab-separated fields")
                j = Judgment(
                    instance_id=parts[0],
                    annotator_id=parts[1],
                    label=parts[2],
                    comment=parts[3] if len(parts) > 3 else "",
                )
            else:
                raise ValueError(f"unknown judgment format {fmt!r}")
        except (KeyError, json.JSONDecodeError, AnnotationError) as exc:
            problems.append(f"line {lineno}: {exc}")
            continue
        judgments.append(j)
    return judgments, problems


def write_judgments(judgments: Iterable[Judgment]) -> str:
    return "".join(
        json.dumps(
            {
                "instance_id": j.instance_id,
                "annotator_id": j.annotator_id,
                "label": j.label,
                "comment": j.comment,
            },
            ensure_ascii=False,
            sort_keys=True,
            separators=(",", ":"),
        )
        + "\n"
        for j in judgments
    )


def agreement_report(
    judgments: Sequence[Judgment],
    instances: Sequence[AnnotationInstance] | None = None,
) -> dict:
    """Overall, pairwise, and per-corpus alpha values as a plain dict."""
    report: dict = {}
    overall = krippendorff_alpha(judgments)
    report["overall"] = {"alpha": overall.value, "degenerate": overall.degenerate, "items": overall.n_items}
    report["pairwise"] = {
        f"{a} vs {b}": {"alpha": res.value, "degenerate": res.degenerate}
        for (a, b), res in pairwise_alphas(judgments).items()
    }
    if instances is not None:
        by_tag: dict[str, list[str]] = {}
        for inst in instances:
            if inst.corpus_tag:
                by_tag.setdefault(inst.corpus_tag, []).append(inst.instance_id)
        report["by_corpus"] = {}
        for tag, ids in sorted(by_tag.items()):
            try:
                res = krippendorff_alpha(judgments, instance_ids=ids)
            except AnnotationError:
                continue
            report["by_corpus"][tag] = {"alpha": res.value, "degenerate": res.degenerate, "items": res.n_items}
    return report
