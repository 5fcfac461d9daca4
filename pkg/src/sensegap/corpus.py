"""Corpus ingestion: sentence filtering, usage search, and random sampling.

A usage is a sentence plus the character span of one target-word occurrence
whose lemma is an inventory headword. Lemmatization is a pluggable contract;
a deterministic lookup-table lemmatizer ships here so the core has no NLP
model dependency.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Iterator, Protocol

from .inventory import SenseInventory

logger = logging.getLogger(__name__)

MAX_SENTENCE_CHARS = 300
MAX_PUNCT_SHARE = 0.25

DROP_LENGTH = "length"
DROP_PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Usage:
    """One marked occurrence of a headword in a sentence."""

    usage_id: str
    sentence: str
    start: int
    end: int
    token_index: int
    headword: str
    corpus_tag: str
    language_tag: str = ""

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end <= len(self.sentence)):
            raise ValueError(
                f"usage {self.usage_id}: span ({self.start}, {self.end}) "
                f"out of bounds for sentence of length {len(self.sentence)}"
            )

    @property
    def target(self) -> str:
        return self.sentence[self.start : self.end]

    def to_dict(self) -> dict:
        return {
            "usage_id": self.usage_id,
            "sentence": self.sentence,
            "start": self.start,
            "end": self.end,
            "token_index": self.token_index,
            "headword": self.headword,
            "corpus_tag": self.corpus_tag,
            "language_tag": self.language_tag,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Usage":
        return cls(
            usage_id=d["usage_id"],
            sentence=d["sentence"],
            start=int(d["start"]),
            end=int(d["end"]),
            token_index=int(d["token_index"]),
            headword=d["headword"],
            corpus_tag=d["corpus_tag"],
            language_tag=d.get("language_tag", ""),
        )


def make_usage_id(sentence: str, start: int, end: int, corpus_tag: str) -> str:
    payload = f"{corpus_tag}\x1f{sentence}\x1f{start}\x1f{end}".encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


class Lemmatizer(Protocol):
    """Deterministic tokenization + lemma lookup."""

    def tokenize(self, sentence: str) -> list[Token]: ...

    def lemma(self, token_text: str) -> str: ...


_WORD_RE = re.compile(r"\w+", re.UNICODE)


class DictLemmatizer:
    """Lookup-table lemmatizer: lowercased form -> lemma, identity otherwise.

    Good enough for tests and for corpora that come with a precomputed
    form->lemma table; swap in a real lemmatizer behind the same contract for
    anything else.
    """

    def __init__(self, table: dict[str, str] | None = None):
        self.table = {k.lower(): v for k, v in (table or {}).items()}

    @classmethod
    def from_tsv(cls, raw: str) -> "DictLemmatizer":
        table = {}
        for line in raw.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"lemmatizer table line needs 2 tab-separated fields: {line!r}")
            table[parts[0]] = parts[1]
        return cls(table)

    def tokenize(self, sentence: str) -> list[Token]:
        return [Token(m.group(0), m.start(), m.end()) for m in _WORD_RE.finditer(sentence)]

    def lemma(self, token_text: str) -> str:
        lowered = token_text.lower()
        return self.table.get(lowered, lowered)


def clean_sentence(sentence: str) -> str:
    """Strip control characters and collapse whitespace. Diacritics stay."""
    chars = []
    for ch in sentence:
        if unicodedata.category(ch) in ("Cc", "Cf"):
            chars.append(" ")
        else:
            chars.append(ch)
    return " ".join("".join(chars).split())


@dataclass(frozen=True)
class FilterDecision:
    keep: bool
    reason: str | None = None


def _is_punctuation_token(token: str) -> bool:
    return not any(ch.isalnum() for ch in token)


def filter_sentence(sentence: str) -> FilterDecision:
    """Drop overlong or punctuation-heavy sentences.

    Tokens are whitespace-delimited; a punctuation token contains no
    alphanumeric character at all. An empty sentence has zero tokens and a
    punctuation share of zero, so it is kept.
    """
    if len(sentence) > MAX_SENTENCE_CHARS:
        return FilterDecision(False, DROP_LENGTH)
    tokens = sentence.split()
    if tokens:
        punct = sum(1 for t in tokens if _is_punctuation_token(t))
        if punct / len(tokens) > MAX_PUNCT_SHARE:
            return FilterDecision(False, DROP_PUNCTUATION)
    return FilterDecision(True, None)


def find_usages(
    sentences: Iterable[str],
    inv: SenseInventory,
    lemmatizer: Lemmatizer,
    corpus_tag: str,
    language_tag: str = "",
    pre_clean: bool = True,
) -> Iterator[Usage]:
    """Scan sentences for occurrences whose lemmas match inventory headwords.

    Multi-token headwords match only as exact contiguous lemma sequences.
    Sentences failing the length/punctuation filter are skipped, as are
    sentences the lemmatizer cannot process (with a warning).
    """
    headwords = set(inv.headwords)
    max_len = max((len(h.split()) for h in headwords), default=1)
    for sentence in sentences:
        if pre_clean:
            sentence = clean_sentence(sentence)
        if not filter_sentence(sentence).keep:
            continue
        try:
            tokens = lemmatizer.tokenize(sentence)
            lemmas = [lemmatizer.lemma(t.text) for t in tokens]
        except Exception:
            logger.warning("lemmatizer failed; sentence skipped: %.60r", sentence)
            continue
        for i in range(len(tokens)):
            for width in range(1, max_len + 1):
                if i + width > len(tokens):
                    break
                candidate = " ".join(lemmas[i : i + width])
                if candidate in headwords:
                    start = tokens[i].start
                    end = tokens[i + width - 1].end
                    yield Usage(
                        usage_id=make_usage_id(sentence, start, end, corpus_tag),
                        sentence=sentence,
                        start=start,
                        end=end,
                        token_index=i,
                        headword=candidate,
                        corpus_tag=corpus_tag,
                        language_tag=language_tag,
                    )


@dataclass
class Phase1Sample:
    """Outcome of the random usage sampling pass over one corpus."""

    usages: list[Usage]
    sampled_headwords: list[str]
    headwords_with_usage: list[str]
    shortfall: bool


def sample_random_phase1(
    usages: Iterable[Usage],
    inventory_headwords: Iterable[str],
    rng_seed: int,
    headword_pool: int = 3000,
    stop_at_headwords_with_usage: int = 150,
    max_usages_per_headword: int = 5,
) -> Phase1Sample:
    """Random-sample usages the way the phase-one annotation data was drawn.

    A random pool of headwords is searched in random order until the target
    number of headwords with at least one usage is reached; for each such
    headword at most ``max_usages_per_headword`` usages are kept, chosen at
    random. Deterministic under a fixed seed. If the corpus cannot satisfy
    the target, whatever exists is returned and the shortfall is flagged.
    """
    rng = random.Random(rng_seed)
    by_headword: dict[str, list[Usage]] = {}
    for usage in usages:
        by_headword.setdefault(usage.headword, []).append(usage)
    for group in by_headword.values():
        group.sort(key=lambda u: u.usage_id)

    universe = sorted(set(inventory_headwords))
    pool = universe if len(universe) <= headword_pool else rng.sample(universe, headword_pool)
    pool = list(pool)
    rng.shuffle(pool)

    kept: list[Usage] = []
    with_usage: list[str] = []
    for headword in pool:
        if len(with_usage) >= stop_at_headwords_with_usage:
            break
        group = by_headword.get(headword)
        if not group:
            continue
        with_usage.append(headword)
        if len(group) > max_usages_per_headword:
            chosen = rng.sample(group, max_usages_per_headword)
        else:
            chosen = list(group)
        kept.extend(sorted(chosen, key=lambda u: u.usage_id))

    shortfall = len(with_usage) < stop_at_headwords_with_usage
    if shortfall:
        logger.warning(
            "sampling shortfall: %d of %d requested headwords had usages",
            len(with_usage),
            stop_at_headwords_with_usage,
        )
    return Phase1Sample(
        usages=kept,
        sampled_headwords=pool,
        headwords_with_usage=with_usage,
        shortfall=shortfall,
    )


def read_sentences(lines: Iterable[str]) -> Iterator[str]:
    """One sentence per line, blank lines dropped."""
    for line in lines:
        line = line.rstrip("\n")
        if line.strip():
            yield line


def write_usages(usages: Iterable[Usage]) -> str:
    return "".join(
        json.dumps(u.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"
        for u in usages
    )


def load_usages(raw: str) -> list[Usage]:
    return [Usage.from_dict(json.loads(line)) for line in raw.splitlines() if line.strip()]
