"""Named RNG substreams derived from one global seed.

Every randomized step (sampling, masking, fold splits, baselines) draws its
own seed from the global one through a stable hash of a name path, so partial
reruns and parallel execution stay reproducible.
"""

from __future__ import annotations

import hashlib
import random


def substream_seed(global_seed: int, *path: object) -> int:
    """Derive a 63-bit seed for the substream identified by ``path``."""
    tag = ":".join(str(p) for p in path)
    digest = hashlib.sha256(f"{global_seed}/{tag}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def substream_rng(global_seed: int, *path: object) -> random.Random:
    """A ``random.Random`` seeded for the named substream."""
    return random.Random(substream_seed(global_seed, *path))
