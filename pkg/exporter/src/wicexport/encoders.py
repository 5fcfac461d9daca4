"""Encoders behind the export job.

``hash:DIM`` is a deterministic stand-in for tests and plumbing checks (the
vector is seeded by the request content hash). Anything else is treated as a
sentence-transformers model name or path (optionally prefixed ``st:``) and
run as a Word-in-Context bi-encoder: the target span is wrapped in the
<t>...</t> marker tokens the model family uses before encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .store import content_hash

TARGET_OPEN = "<t>"
TARGET_CLOSE = "</t>"


class ModelLoadError(Exception):
    pass


@dataclass(frozen=True)
class Request:
    request_id: str
    text: str
    start: int
    end: int

    @property
    def digest(self) -> bytes:
        return content_hash(self.text, self.start, self.end)


class HashEncoder:
    """Content-hash-seeded standard-normal vectors; fully deterministic."""

    def __init__(self, dim: int):
        if dim < 2:
            raise ModelLoadError(f"hash encoder dim must be >= 2, got {dim}")
        self._dim = dim

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def determinism_note(self) -> str:
        return "content-hash seeded; bit-reproducible everywhere"

    @property
    def truncation_note(self) -> str:
        return "none (no tokenizer)"

    def encode(self, requests: Sequence[Request], batch_size: int) -> list[np.ndarray]:
        out = []
        for request in requests:
            seed = int.from_bytes(request.digest[:8], "big")
            rng = np.random.default_rng(seed)
            out.append(rng.standard_normal(self._dim).astype(np.float32))
        return out


class WicBiEncoder:
    """sentence-transformers bi-encoder with inline target marking."""

    def __init__(self, model_name: str):
        try:
            import torch
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ModelLoadError(f"sentence-transformers unavailable: {exc}") from exc
        try:
            self._model = SentenceTransformer(model_name)
        except Exception as exc:
            raise ModelLoadError(f"cannot load model {model_name!r}: {exc}") from exc
        self._model.eval()
        torch.set_grad_enabled(False)
        # best-effort determinism; anything residual is recorded in the manifest
        try:
            torch.use_deterministic_algorithms(True, warn_only=True)
            self._determinism = "eval mode, grad disabled, deterministic algorithms requested (warn_only)"
        except Exception:
            self._determinism = "eval mode, grad disabled; deterministic algorithms unavailable"
        self._dim = int(self._model.get_sentence_embedding_dimension())
        self._max_seq = getattr(self._model, "max_seq_length", None)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def determinism_note(self) -> str:
        return self._determinism

    @property
    def truncation_note(self) -> str:
        return f"tokenizer default, max_seq_length={self._max_seq}"

    @staticmethod
    def mark(request: Request) -> str:
        t = request.text
        return t[: request.start] + TARGET_OPEN + t[request.start : request.end] + TARGET_CLOSE + t[request.end :]

    def encode(self, requests: Sequence[Request], batch_size: int) -> list[np.ndarray]:
        texts = [self.mark(r) for r in requests]
        matrix = self._model.encode(
            texts,
            batch_size=batch_size,
            convert_to_numpy=True,
            normalize_embeddings=False,
            show_progress_bar=False,
        )
        return [np.asarray(row, dtype=np.float32) for row in matrix]


def load_encoder(model_id: str):
    if model_id.startswith("hash:"):
        try:
            dim = int(model_id.split(":", 1)[1])
        except ValueError as exc:
            raise ModelLoadError(f"bad hash encoder spec {model_id!r}") from exc
        return HashEncoder(dim)
    name = model_id[3:] if model_id.startswith("st:") else model_id
    if not name:
        raise ModelLoadError(f"empty model identifier {model_id!r}")
    return WicBiEncoder(name)
