"""Writer for the sensegap binary vector store and its manifest.

Independent implementation of the published layout (little-endian):
magic b"WICVEC\\x00\\x01", dim uint32, dtype tag "float32\\0" (8 bytes),
count uint64, then per record a 32-byte sha256 content hash and dim float32
values. Records are sorted by hash and deduplicated so identical content
always produces byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
from typing import Mapping

import numpy as np

MAGIC = b"WICVEC\x00\x01"
DTYPE_TAG = b"float32\x00"
HEADER = struct.Struct("<8sI8sQ")
HASH_BYTES = 32

MANIFEST_SCHEMA = "wic-vector-manifest.v1"


class StoreError(Exception):
    pass


def content_hash(text: str, start: int, end: int) -> bytes:
    return hashlib.sha256(f"{start}:{end}:{text}".encode("utf-8")).digest()


def write_store(path: str, dim: int, records: Mapping[bytes, np.ndarray]) -> None:
    if dim <= 0:
        raise StoreError("dim must be positive")
    items = sorted(records.items())
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(HEADER.pack(MAGIC, dim, DTYPE_TAG, len(items)))
            for digest, vector in items:
                arr = np.asarray(vector, dtype=np.float32)
                if arr.shape != (dim,):
                    raise StoreError(f"vector shape {arr.shape} does not match dim {dim}")
                fh.write(digest)
                fh.write(arr.tobytes())
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def read_store(path: str) -> tuple[int, dict[bytes, np.ndarray]]:
    with open(path, "rb") as fh:
        header = fh.read(HEADER.size)
        if len(header) != HEADER.size:
            raise StoreError("truncated store header")
        magic, dim, dtype_tag, count = HEADER.unpack(header)
        if magic != MAGIC:
            raise StoreError("bad magic; not a vector store file")
        if dtype_tag != DTYPE_TAG:
            raise StoreError(f"unsupported dtype tag: {dtype_tag!r}")
        record_size = HASH_BYTES + dim * 4
        vectors = {}
        for _ in range(count):
            record = fh.read(record_size)
            if len(record) != record_size:
                raise StoreError("truncated store record")
            vectors[record[:HASH_BYTES]] = np.frombuffer(record[HASH_BYTES:], dtype="<f4").copy()
    return dim, vectors


def write_manifest(path: str, dim: int, requests: Mapping[str, bytes], meta: dict) -> None:
    doc = {
        "schema": MANIFEST_SCHEMA,
        "dim": dim,
        "count": len(set(requests.values())),
        "requests": {rid: digest.hex() for rid, digest in sorted(requests.items())},
        "meta": meta,
    }
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, ensure_ascii=False, sort_keys=True, indent=2)
            fh.write("\n")
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
