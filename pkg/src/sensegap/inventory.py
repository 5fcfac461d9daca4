"""Sense inventories: dictionary dumps parsed into a uniform headword -> senses map.

Two dump schemas are supported. WordNet-like dumps list glossed, optionally
exemplified entries per headword and may mark whether the headword is the
primary headword of the underlying synset. SO-like dumps (Svensk ordbok style)
list main definitions with gloss / secondary gloss / examples / attestation
year; sub-entries are carried along as metadata but are not treated as senses.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Iterator

logger = logging.getLogger(__name__)

WORDNET_LIKE = "wordnet_like"
SO_LIKE = "so_like"

KIND_GLOSS = "gloss"
KIND_EXAMPLES = "examples"
KIND_BOTH = "both"

_COMPLETENESS_KINDS = (KIND_GLOSS, KIND_EXAMPLES, KIND_BOTH)

_SCHEMA_TAG = "sense-inventory.v1"


class InventoryError(Exception):
    """Base class for inventory parsing problems."""


class ParseError(InventoryError):
    """A record could not be interpreted; names the offending headword."""


class DuplicateHeadwordError(InventoryError):
    """The same headword appears in more than one record."""


@dataclass
class SenseEntry:
    """One sense of a headword.

    ``gloss`` may be absent; ``secondary_gloss`` then stands in for it (the
    effective gloss). ``is_primary`` records whether the headword is the
    primary headword of the sense's synset; SO senses are always primary.
    """

    sense_id: str
    gloss: str | None = None
    secondary_gloss: str | None = None
    examples: list[str] = field(default_factory=list)
    pos: str | None = None
    is_primary: bool = True
    year: str | None = None
    synset_members: list[str] = field(default_factory=list)
    sub_entries: list[dict] = field(default_factory=list)

    @property
    def effective_gloss(self) -> str | None:
        if self.gloss:
            return self.gloss
        if self.secondary_gloss:
            return self.secondary_gloss
        return None

    def has_gloss(self) -> bool:
        return self.effective_gloss is not None

    def has_examples(self) -> bool:
        return len(self.examples) > 0

    def is_complete(self, kind: str) -> bool:
        if kind == KIND_GLOSS:
            return self.has_gloss()
        if kind == KIND_EXAMPLES:
            return self.has_examples()
        if kind == KIND_BOTH:
            return self.has_gloss() and self.has_examples()
        raise ValueError(f"unknown completeness kind: {kind!r}")


@dataclass
class HeadwordEntry:
    headword: str
    senses: list[SenseEntry]
    # sense_ids in frequency order, most frequent first (WordNet dump order).
    sense_frequency_rank: list[str] | None = None

    def __post_init__(self) -> None:
        if not self.headword:
            raise ValueError("headword must be non-empty")
        if not self.senses:
            raise ValueError(f"headword {self.headword!r} has no senses")

    def sense_by_id(self, sense_id: str) -> SenseEntry:
        for sense in self.senses:
            if sense.sense_id == sense_id:
                return sense
        raise KeyError(sense_id)


@dataclass
class SenseInventory:
    headwords: dict[str, HeadwordEntry]
    source_tag: str

    def __len__(self) -> int:
        return len(self.headwords)

    def __contains__(self, headword: str) -> bool:
        return headword in self.headwords

    def entries(self) -> Iterator[HeadwordEntry]:
        for headword in sorted(self.headwords):
            yield self.headwords[headword]

    def all_senses(self) -> Iterator[SenseEntry]:
        for entry in self.entries():
            yield from entry.senses

    def has_frequency_metadata(self) -> bool:
        return any(e.sense_frequency_rank for e in self.headwords.values())


def make_sense_id(headword: str, ordinal: int, gloss: str | None) -> str:
    """Deterministic content hash so reruns assign stable sense ids."""
    payload = f"{headword}\x1f{ordinal}\x1f{gloss or ''}".encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:16]


def _iter_records(raw: str) -> Iterator[dict]:
    """Accept a JSON array, a single JSON object, or JSON lines."""
    stripped = raw.strip()
    if not stripped:
        return
    try:
        doc = json.loads(stripped)
    except json.JSONDecodeError:
        for lineno, line in enumerate(stripped.splitlines(), start=1):
            line = line.strip().rstrip(",")
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {lineno}: not a valid record ({exc})") from exc
        return
    if isinstance(doc, list):
        yield from doc
    else:
        yield doc


def parse_wordnet_dump(raw: str) -> SenseInventory:
    """Parse a WordNet-like dump into a SenseInventory.

    Every entry must carry a non-empty gloss. ``is_primary`` defaults to true
    when the dump carries no primary-synset marker. Dump order of the entries
    doubles as the sense frequency ranking.
    """
    headwords: dict[str, HeadwordEntry] = {}
    for record in _iter_records(raw):
        if not isinstance(record, dict):
            raise ParseError(f"record is not an object: {record!r}")
        headword = record.get("headword")
        if not headword or not isinstance(headword, str):
            raise ParseError(f"record without a headword: {record!r}")
        if headword in headwords:
            raise DuplicateHeadwordError(headword)
        entries = record.get("entries")
        if not isinstance(entries, list) or not entries:
            raise ParseError(f"headword {headword!r}: missing or empty entries list")
        senses = []
        for ordinal, entry in enumerate(entries):
            if not isinstance(entry, dict):
                raise ParseError(f"headword {headword!r}: entry {ordinal} is not an object")
            gloss = entry.get("gloss")
            if not gloss or not isinstance(gloss, str):
                raise ParseError(f"headword {headword!r}: entry {ordinal} has no gloss")
            examples = entry.get("examples") or []
            if not isinstance(examples, list) or any(not isinstance(e, str) for e in examples):
                raise ParseError(f"headword {headword!r}: entry {ordinal} has malformed examples")
            senses.append(
                SenseEntry(
                    sense_id=make_sense_id(headword, ordinal, gloss),
                    gloss=gloss,
                    examples=list(examples),
                    pos=entry.get("pos") or None,
                    is_primary=bool(entry.get("is_primary", True)),
                    synset_members=list(entry.get("synset_members") or []),
                )
            )
        headwords[headword] = HeadwordEntry(
            headword=headword,
            senses=senses,
            sense_frequency_rank=[s.sense_id for s in senses],
        )
    return SenseInventory(headwords=headwords, source_tag=WORDNET_LIKE)


def parse_so_dump(raw: str, include_sub_entries: bool = False) -> SenseInventory:
    """Parse an SO-like dump into a SenseInventory.

    Only main definitions become senses; their sub-entries are kept as
    metadata. ``include_sub_entries`` additionally ingests the nested
    sub-entries (depth first, after the main definitions) as ordinary
    senses, which the source extraction deliberately left out. A missing
    main gloss falls back to the secondary gloss when the effective gloss
    is needed. Headwords with an empty definitions list are skipped with a
    warning rather than failing the whole dump.
    """
    headwords: dict[str, HeadwordEntry] = {}
    for record in _iter_records(raw):
        if not isinstance(record, dict):
            raise ParseError(f"record is not an object: {record!r}")
        headword = record.get("word")
        if not headword or not isinstance(headword, str):
            raise ParseError(f"record without a word: {record!r}")
        if headword in headwords:
            raise DuplicateHeadwordError(headword)
        definitions = record.get("definitions")
        if definitions is None or not isinstance(definitions, list):
            raise ParseError(f"headword {headword!r}: missing definitions list")
        if not definitions:
            logger.warning("headword %r has no definitions; skipped", headword)
            continue
        pos = record.get("nature") or None
        senses = []

        def make_sense(definition, ordinal, label) -> SenseEntry:
            if not isinstance(definition, dict):
                raise ParseError(f"headword {headword!r}: {label} is not an object")
            examples = definition.get("examples") or []
            if not isinstance(examples, list) or any(not isinstance(e, str) for e in examples):
                raise ParseError(f"headword {headword!r}: {label} has malformed examples")
            gloss = definition.get("gloss") or None
            return SenseEntry(
                sense_id=make_sense_id(headword, ordinal, gloss),
                gloss=gloss,
                secondary_gloss=definition.get("sub_gloss") or None,
                examples=list(examples),
                pos=pos,
                is_primary=True,
                year=str(definition["year"]) if definition.get("year") else None,
                sub_entries=list(definition.get("sub_entries") or []),
            )

        for ordinal, definition in enumerate(definitions):
            senses.append(make_sense(definition, ordinal, f"definition {ordinal}"))
        if include_sub_entries:
            counter = len(senses)

            def ingest_subs(definition, label):
                nonlocal counter
                for j, sub in enumerate(definition.get("sub_entries") or []):
                    sub_label = f"{label}.sub{j}"
                    senses.append(make_sense(sub, counter, sub_label))
                    counter += 1
                    ingest_subs(sub, sub_label)

            for i, definition in enumerate(definitions):
                ingest_subs(definition, f"definition {i}")
        headwords[headword] = HeadwordEntry(headword=headword, senses=senses)
    return SenseInventory(headwords=headwords, source_tag=SO_LIKE)


# ---------------------------------------------------------------------------
# Canonical line-delimited serialization


def _dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _sense_to_dict(sense: SenseEntry) -> dict:
    return {
        "sense_id": sense.sense_id,
        "gloss": sense.gloss,
        "secondary_gloss": sense.secondary_gloss,
        "examples": sense.examples,
        "pos": sense.pos,
        "is_primary": sense.is_primary,
        "year": sense.year,
        "synset_members": sense.synset_members,
        "sub_entries": sense.sub_entries,
    }


def _sense_from_dict(d: dict) -> SenseEntry:
    return SenseEntry(
        sense_id=d["sense_id"],
        gloss=d.get("gloss"),
        secondary_gloss=d.get("secondary_gloss"),
        examples=list(d.get("examples") or []),
        pos=d.get("pos"),
        is_primary=bool(d.get("is_primary", True)),
        year=d.get("year"),
        synset_members=list(d.get("synset_members") or []),
        sub_entries=list(d.get("sub_entries") or []),
    )


def serialize_inventory(inv: SenseInventory) -> str:
    """Canonical form: a header line, then one headword entry per line."""
    lines = [_dumps({"record": "header", "schema": _SCHEMA_TAG, "source_tag": inv.source_tag})]
    for entry in inv.entries():
        lines.append(
            _dumps(
                {
                    "record": "headword",
                    "headword": entry.headword,
                    "sense_frequency_rank": entry.sense_frequency_rank,
                    "senses": [_sense_to_dict(s) for s in entry.senses],
                }
            )
        )
    return "\n".join(lines) + "\n"


def load_inventory(raw: str) -> SenseInventory:
    lines = [line for line in raw.splitlines() if line.strip()]
    if not lines:
        raise ParseError("empty inventory document")
    header = json.loads(lines[0])
    if header.get("record") != "header" or header.get("schema") != _SCHEMA_TAG:
        raise ParseError("missing or unrecognized inventory header line")
    source_tag = header["source_tag"]
    headwords: dict[str, HeadwordEntry] = {}
    for line in lines[1:]:
        d = json.loads(line)
        if d.get("record") != "headword":
            raise ParseError(f"unexpected record type: {d.get('record')!r}")
        headword = d["headword"]
        if headword in headwords:
            raise DuplicateHeadwordError(headword)
        headwords[headword] = HeadwordEntry(
            headword=headword,
            senses=[_sense_from_dict(s) for s in d["senses"]],
            sense_frequency_rank=d.get("sense_frequency_rank"),
        )
    return SenseInventory(headwords=headwords, source_tag=source_tag)


# ---------------------------------------------------------------------------
# Descriptive statistics


@dataclass
class StatsReport:
    """Descriptive inventory statistics.

    Averages over an empty denominator are None (absent), never zero.
    Lengths are measured in characters, spaces included.
    """

    headwords: int
    avg_senses_per_headword: float | None
    avg_senses_per_multisense_headword: float | None
    pct_senses_with_gloss: float | None
    avg_gloss_length: float | None
    pct_senses_with_examples: float | None
    avg_examples_per_sense: float | None
    avg_examples_per_exemplified_sense: float | None
    avg_example_length: float | None

    def to_dict(self) -> dict:
        return {
            "headwords": self.headwords,
            "avg_senses_per_headword": self.avg_senses_per_headword,
            "avg_senses_per_multisense_headword": self.avg_senses_per_multisense_headword,
            "pct_senses_with_gloss": self.pct_senses_with_gloss,
            "avg_gloss_length": self.avg_gloss_length,
            "pct_senses_with_examples": self.pct_senses_with_examples,
            "avg_examples_per_sense": self.avg_examples_per_sense,
            "avg_examples_per_exemplified_sense": self.avg_examples_per_exemplified_sense,
            "avg_example_length": self.avg_example_length,
        }


def _mean(values: list[float]) -> float | None:
    if not values:
        return None
    return sum(values) / len(values)


def inventory_stats(inv: SenseInventory) -> StatsReport:
    senses = list(inv.all_senses())
    sense_counts = [len(e.senses) for e in inv.headwords.values()]
    multi = [c for c in sense_counts if c > 1]
    glossed = [s for s in senses if s.has_gloss()]
    exemplified = [s for s in senses if s.has_examples()]
    all_examples = [ex for s in senses for ex in s.examples]
    return StatsReport(
        headwords=len(inv),
        avg_senses_per_headword=_mean([float(c) for c in sense_counts]),
        avg_senses_per_multisense_headword=_mean([float(c) for c in multi]),
        pct_senses_with_gloss=(100.0 * len(glossed) / len(senses)) if senses else None,
        avg_gloss_length=_mean([float(len(s.effective_gloss)) for s in glossed]),
        pct_senses_with_examples=(100.0 * len(exemplified) / len(senses)) if senses else None,
        avg_examples_per_sense=_mean([float(len(s.examples)) for s in senses]),
        avg_examples_per_exemplified_sense=_mean([float(len(s.examples)) for s in exemplified]),
        avg_example_length=_mean([float(len(ex)) for ex in all_examples]),
    )


# ---------------------------------------------------------------------------
# Completeness views

STATUS_COMPLETE = "complete"
STATUS_PARTIAL = "partial"
STATUS_UNREPRESENTABLE = "unrepresentable"


@dataclass
class HeadwordCompleteness:
    headword: str
    complete_sense_ids: list[str]
    total_senses: int

    @property
    def status(self) -> str:
        if not self.complete_sense_ids:
            return STATUS_UNREPRESENTABLE
        if len(self.complete_sense_ids) < self.total_senses:
            return STATUS_PARTIAL
        return STATUS_COMPLETE


@dataclass
class CompletenessView:
    """Per-headword completeness for one representation kind.

    A headword with no complete sense cannot be represented at all; one with
    some-but-not-all complete senses is flagged partial, which the candidate
    selection step later excludes.
    """

    kind: str
    entries: dict[str, HeadwordCompleteness]

    def complete_ids(self, headword: str) -> list[str]:
        entry = self.entries.get(headword)
        return list(entry.complete_sense_ids) if entry else []

    def status(self, headword: str) -> str:
        entry = self.entries.get(headword)
        return entry.status if entry else STATUS_UNREPRESENTABLE

    def headwords_with_status(self, status: str) -> list[str]:
        return sorted(h for h, e in self.entries.items() if e.status == status)


def complete_senses(inv: SenseInventory, kind: str) -> CompletenessView:
    """Which senses are usable under the given representation kind.

    ``gloss`` requires an effective gloss, ``examples`` at least one example;
    ``both`` (the intersection) is what a simulation shared across gloss and
    example models has to use.
    """
    if kind not in _COMPLETENESS_KINDS:
        raise ValueError(f"unknown completeness kind: {kind!r}")
    entries = {}
    for entry in inv.entries():
        complete = [s.sense_id for s in entry.senses if s.is_complete(kind)]
        entries[entry.headword] = HeadwordCompleteness(
            headword=entry.headword,
            complete_sense_ids=complete,
            total_senses=len(entry.senses),
        )
    return CompletenessView(kind=kind, entries=entries)


def write_stats(report: StatsReport) -> str:
    """Stats report as a flat key-value JSON document."""
    return json.dumps(report.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n"
