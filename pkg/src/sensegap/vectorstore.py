"""Binary vector store: the file contract between this package and embedders.

Layout (little-endian):

    magic   8 bytes   b"WICVEC\\x00\\x01"
    dim     uint32
    dtype   8 bytes   ASCII, NUL-padded; only "float32" is defined
    count   uint64
    records count times:
        hash    32 bytes  sha256 of the request content (see request_content_hash)
        vector  dim * 4 bytes, float32

Records are sorted by hash and deduplicated, so rewriting the same content
yields a byte-identical file. A companion JSON manifest maps request ids to
content hashes.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
import threading
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

MAGIC = b"WICVEC\x00\x01"
DTYPE_TAG = b"float32\x00"
HEADER = struct.Struct("<8sI8sQ")
HASH_BYTES = 32

MANIFEST_SCHEMA = "wic-vector-manifest.v1"


class VectorStoreError(Exception):
    pass


def request_content_hash(text: str, start: int, end: int) -> bytes:
    """Content hash of an embedding request; the cache and store key."""
    return hashlib.sha256(f"{start}:{end}:{text}".encode("utf-8")).digest()


def write_store(path: str, dim: int, records: Mapping[bytes, np.ndarray]) -> None:
    """Write hash -> vector records atomically (temp file + rename)."""
    if dim <= 0:
        raise VectorStoreError("dim must be positive")
    items = sorted(records.items())
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(HEADER.pack(MAGIC, dim, DTYPE_TAG, len(items)))
            for digest, vector in items:
                if len(digest) != HASH_BYTES:
                    raise VectorStoreError(f"hash must be {HASH_BYTES} bytes, got {len(digest)}")
                arr = np.asarray(vector, dtype=np.float32)
                if arr.shape != (dim,):
                    raise VectorStoreError(f"vector shape {arr.shape} does not match dim {dim}")
                fh.write(digest)
                fh.write(arr.tobytes())
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def read_store(path: str) -> tuple[int, dict[bytes, np.ndarray]]:
    """Read a store file back into (dim, hash -> float32 vector)."""
    with open(path, "rb") as fh:
        header = fh.read(HEADER.size)
        if len(header) != HEADER.size:
            raise VectorStoreError("truncated store header")
        magic, dim, dtype_tag, count = HEADER.unpack(header)
        if magic != MAGIC:
            raise VectorStoreError("bad magic; not a vector store file")
        if dtype_tag != DTYPE_TAG:
            raise VectorStoreError(f"unsupported dtype tag: {dtype_tag!r}")
        record_size = HASH_BYTES + dim * 4
        vectors: dict[bytes, np.ndarray] = {}
        for _ in range(count):
            record = fh.read(record_size)
            if len(record) != record_size:
                raise VectorStoreError("truncated store record")
            digest = record[:HASH_BYTES]
            vectors[digest] = np.frombuffer(record[HASH_BYTES:], dtype="<f4").copy()
        if fh.read(1):
            raise VectorStoreError("trailing bytes after declared record count")
    return dim, vectors


def write_manifest(path: str, dim: int, requests: Mapping[str, bytes], meta: dict | None = None) -> None:
    doc = {
        "schema": MANIFEST_SCHEMA,
        "dim": dim,
        "count": len(set(requests.values())),
        "requests": {rid: digest.hex() for rid, digest in sorted(requests.items())},
        "meta": meta or {},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


def read_manifest(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != MANIFEST_SCHEMA:
        raise VectorStoreError("unrecognized manifest schema")
    return doc


@dataclass
class VectorCache:
    """In-memory hash -> vector cache; concurrent writes of identical keys are
    harmless because provider determinism makes the values identical."""

    _vectors: dict[bytes, np.ndarray] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def get(self, digest: bytes) -> np.ndarray | None:
        with self._lock:
            return self._vectors.get(digest)

    def put(self, digest: bytes, vector: np.ndarray) -> None:
        with self._lock:
            self._vectors[digest] = vector

    def __len__(self) -> int:
        return len(self._vectors)

    def as_records(self) -> dict[bytes, np.ndarray]:
        with self._lock:
            return dict(self._vectors)

    def update(self, records: Mapping[bytes, np.ndarray]) -> None:
        with self._lock:
            self._vectors.update(records)


def merge_into_store(path: str, dim: int, new_records: Mapping[bytes, np.ndarray]) -> int:
    """Merge records into an existing store (or create it); returns the number
    of records actually added."""
    existing: dict[bytes, np.ndarray] = {}
    if os.path.exists(path):
        stored_dim, existing = read_store(path)
        if stored_dim != dim:
            raise VectorStoreError(f"store dim {stored_dim} != new dim {dim}")
    added = [h for h in new_records if h not in existing]
    merged = dict(existing)
    for h in added:
        merged[h] = new_records[h]
    write_store(path, dim, merged)
    return len(added)
