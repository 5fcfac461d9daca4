"""Embedding requests for usages and senses, via headword replacement strategies.

Word-in-Context encoders need a target span inside the text they embed.
Glosses usually do not contain their headword, and a dictionary example may
contain a synonym instead of the headword itself, so the text is rewritten
first: the replacement strategies below inject the headword (0 leaves the
text alone, 1 prefixes, 2 parenthesizes, 3 appends with a connective, 4
substitutes an in-text synonym). Senses represented by several examples get
the mean of the example vectors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Mapping, Protocol, Sequence

import numpy as np

from .corpus import Usage
from .inventory import SenseEntry, SenseInventory, WORDNET_LIKE
from .vectorstore import VectorCache, request_content_hash

USAGE_MODE_DEFAULT = "default"
USAGE_MODE_SUB = "SUB"
USAGE_MODES = (USAGE_MODE_DEFAULT, USAGE_MODE_SUB)

GLOSS_MODES = ("G0", "G1", "G2", "G3")
EXAMPLE_MODES = ("E0", "E1", "E2", "E3", "E4")
SENSE_MODES = GLOSS_MODES + EXAMPLE_MODES

SIM_COS = "COS"
SIM_SPR = "SPR"
SIMILARITIES = (SIM_COS, SIM_SPR)

DEFAULT_BATCH_SIZE = 32


class StrategyError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingRequest:
    request_id: str
    text: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end <= len(self.text)):
            raise ValueError(f"request {self.request_id}: invalid span ({self.start}, {self.end})")

    @property
    def content_hash(self) -> bytes:
        return request_content_hash(self.text, self.start, self.end)

    def to_dict(self) -> dict:
        return {"request_id": self.request_id, "text": self.text, "start": self.start, "end": self.end}


class EmbeddingProvider(Protocol):
    """Deterministic, order-preserving batch embedder."""

    def embed_batch(self, requests: Sequence[EmbeddingRequest]) -> list[np.ndarray]: ...

    def dim(self) -> int: ...


@dataclass(frozen=True)
class ModelConfig:
    """One point of the model hyperparameter space."""

    usage_mode: str = USAGE_MODE_DEFAULT
    sense_mode: str = "G1"
    similarity: str = SIM_COS
    threshold: float = 0.5

    def __post_init__(self) -> None:
        if self.usage_mode not in USAGE_MODES:
            raise ValueError(f"unknown usage mode {self.usage_mode!r}")
        if self.sense_mode not in SENSE_MODES:
            raise ValueError(f"unknown sense mode {self.sense_mode!r}")
        if self.similarity not in SIMILARITIES:
            raise ValueError(f"unknown similarity {self.similarity!r}")
        if not (0.0 <= self.threshold <= 1.0):
            raise ValueError(f"threshold {self.threshold} outside [0, 1]")

    @property
    def identifier(self) -> str:
        parts = [self.sense_mode]
        if self.usage_mode == USAGE_MODE_SUB:
            parts.append("SUB")
        parts.append(self.similarity)
        return "_".join(parts)

    @classmethod
    def from_identifier(cls, ident: str, threshold: float = 0.5) -> "ModelConfig":
        parts = ident.split("_")
        if len(parts) == 2:
            sense_mode, similarity = parts
            usage_mode = USAGE_MODE_DEFAULT
        elif len(parts) == 3 and parts[1] == "SUB":
            sense_mode, usage_mode, similarity = parts[0], USAGE_MODE_SUB, parts[2]
        else:
            raise ValueError(f"cannot parse model identifier {ident!r}")
        return cls(usage_mode=usage_mode, sense_mode=sense_mode, similarity=similarity, threshold=threshold)

    def with_threshold(self, threshold: float) -> "ModelConfig":
        return replace(self, threshold=threshold)


def validate_model_config(config: ModelConfig, inv: SenseInventory) -> None:
    """E4 substitutes an in-example synset member, which only WordNet-like
    inventories define."""
    if config.sense_mode == "E4" and inv.source_tag != WORDNET_LIKE:
        raise ValueError("sense mode E4 requires a wordnet_like inventory")


def _connective(language_tag: str) -> str:
    return "dvs." if language_tag.lower().startswith("sv") else "i.e."


def apply_strategy(
    strategy: int,
    headword: str,
    sequence: str,
    contained_headword_span: tuple[int, int] | None = None,
    language_tag: str = "en",
) -> tuple[str, tuple[int, int]]:
    """Rewrite ``sequence`` so it contains a target span for ``headword``.

    Strategy 4 needs a span of an in-text synset member to replace; without
    one it falls back to strategy 2. The replacement is a raw substring swap,
    no morphological agreement (an article before the replaced word is left
    untouched).
    """
    if strategy not in (0, 1, 2, 3, 4):
        raise StrategyError(f"strategy must be in 0..4, got {strategy}")
    if contained_headword_span is not None:
        s, e = contained_headword_span
        if not (0 <= s < e <= len(sequence)):
            raise StrategyError(f"contained span ({s}, {e}) out of bounds")
    if strategy == 4 and contained_headword_span is None:
        strategy = 2

    if strategy == 0:
        span = contained_headword_span if contained_headword_span else (0, len(sequence))
        return sequence, span
    if strategy == 1:
        return f"{headword}: {sequence}", (0, len(headword))
    if strategy == 2:
        start = len(sequence) + 2
        return f"{sequence} ({headword})", (start, start + len(headword))
    if strategy == 3:
        prefix = f"{sequence}, {_connective(language_tag)}, "
        return prefix + headword, (len(prefix), len(prefix) + len(headword))
    s, e = contained_headword_span  # strategy 4
    text = sequence[:s] + headword + sequence[e:]
    return text, (s, s + len(headword))


def find_contained_span(text: str, candidates: Sequence[str]) -> tuple[int, int] | None:
    """First left-to-right whole-word occurrence of any candidate; ties at the
    same position go to the longest candidate."""
    best: tuple[int, int] | None = None
    for candidate in candidates:
        if not candidate:
            continue
        m = re.search(rf"(?<!\w){re.escape(candidate)}(?!\w)", text, flags=re.IGNORECASE)
        if m is None:
            continue
        span = (m.start(), m.end())
        if best is None or span[0] < best[0] or (span[0] == best[0] and span[1] > best[1]):
            best = span
    return best


def build_usage_request(usage: Usage, mode: str) -> EmbeddingRequest:
    """Request for a target usage; SUB swaps the inflected target for the
    headword before embedding."""
    if mode not in USAGE_MODES:
        raise ValueError(f"unknown usage mode {mode!r}")
    if mode == USAGE_MODE_DEFAULT:
        return EmbeddingRequest(
            request_id=f"usage:{usage.usage_id}",
            text=usage.sentence,
            start=usage.start,
            end=usage.end,
        )
    text = usage.sentence[: usage.start] + usage.headword + usage.sentence[usage.end :]
    return EmbeddingRequest(
        request_id=f"usage:{usage.usage_id}",
        text=text,
        start=usage.start,
        end=usage.start + len(usage.headword),
    )


def build_sense_requests(
    sense: SenseEntry,
    headword: str,
    mode: str,
    language_tag: str = "en",
) -> list[EmbeddingRequest] | None:
    """Requests representing one sense under a sense mode.

    G modes rewrite the effective gloss, E modes rewrite each example; the
    sense vector is the mean over the returned requests. None means the sense
    is incomplete for this mode and has no representation.
    """
    if mode not in SENSE_MODES:
        raise ValueError(f"unknown sense mode {mode!r}")
    strategy = int(mode[1])
    if mode.startswith("G"):
        gloss = sense.effective_gloss
        if gloss is None:
            return None
        span_candidates = [headword]
        contained = find_contained_span(gloss, span_candidates)
        text, span = apply_strategy(strategy, headword, gloss, contained, language_tag)
        return [
            EmbeddingRequest(
                request_id=f"sense:{sense.sense_id}:gloss",
                text=text,
                start=span[0],
                end=span[1],
            )
        ]
    if not sense.examples:
        return None
    candidates = [headword] + [m for m in sense.synset_members if m != headword]
    requests = []
    for i, example in enumerate(sense.examples):
        contained = find_contained_span(example, candidates)
        text, span = apply_strategy(strategy, headword, example, contained, language_tag)
        requests.append(
            EmbeddingRequest(
                request_id=f"sense:{sense.sense_id}:ex{i}",
                text=text,
                start=span[0],
                end=span[1],
            )
        )
    return requests


def embed_usage(usage: Usage, mode: str, provider: EmbeddingProvider) -> np.ndarray:
    return provider.embed_batch([build_usage_request(usage, mode)])[0]


def embed_sense(
    sense: SenseEntry,
    headword: str,
    mode: str,
    provider: EmbeddingProvider,
    language_tag: str = "en",
) -> np.ndarray | None:
    requests = build_sense_requests(sense, headword, mode, language_tag)
    if requests is None:
        return None
    vectors = provider.embed_batch(requests)
    return mean_vector(vectors)


def mean_vector(vectors: Sequence[np.ndarray]) -> np.ndarray:
    stacked = np.stack([np.asarray(v, dtype=np.float64) for v in vectors])
    return stacked.mean(axis=0)


class MockEmbeddingProvider:
    """Deterministic provider for tests and desk-scale runs: the vector is a
    standard-normal draw seeded by the request content hash, so identical
    requests always embed identically and the span participates in the seed."""

    def __init__(self, dim: int = 16, batch_size: int = DEFAULT_BATCH_SIZE):
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self._dim = dim
        self.batch_size = batch_size

    def dim(self) -> int:
        return self._dim

    def _one(self, request: EmbeddingRequest) -> np.ndarray:
        seed = int.from_bytes(request.content_hash[:8], "big")
        rng = np.random.default_rng(seed)
        return rng.standard_normal(self._dim).astype(np.float32)

    def embed_batch(self, requests: Sequence[EmbeddingRequest]) -> list[np.ndarray]:
        out = []
        for i in range(0, len(requests), self.batch_size):
            out.extend(self._one(r) for r in requests[i : i + self.batch_size])
        return out


class ProviderError(Exception):
    def __init__(self, message: str, request_id: str | None = None):
        super().__init__(message if request_id is None else f"{message} (request {request_id})")
        self.request_id = request_id


class StoreBackedProvider:
    """Serves precomputed vectors (e.g. written by an external embedder)."""

    def __init__(self, dim: int, vectors: Mapping[bytes, np.ndarray]):
        self._dim = dim
        self._vectors = dict(vectors)

    def dim(self) -> int:
        return self._dim

    def embed_batch(self, requests: Sequence[EmbeddingRequest]) -> list[np.ndarray]:
        out = []
        for request in requests:
            vector = self._vectors.get(request.content_hash)
            if vector is None:
                raise ProviderError("vector missing from store", request.request_id)
            out.append(vector)
        return out


@dataclass
class CachingProvider:
    """Memoizes an inner provider on request content hashes."""

    inner: EmbeddingProvider
    cache: VectorCache = field(default_factory=VectorCache)

    def dim(self) -> int:
        return self.inner.dim()

    def embed_batch(self, requests: Sequence[EmbeddingRequest]) -> list[np.ndarray]:
        missing = []
        for request in requests:
            if self.cache.get(request.content_hash) is None:
                missing.append(request)
        if missing:
            for request, vector in zip(missing, self.inner.embed_batch(missing)):
                self.cache.put(request.content_hash, vector)
        return [self.cache.get(r.content_hash) for r in requests]
