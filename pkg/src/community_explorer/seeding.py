"""
Named seed derivation.

All randomness flows from one top-level integer seed. A sub-computation asks for
a generator by a path such as ``("sigclust", "replicate", 17)``; the path is hashed
with SHA-256 and mixed into a :class:`numpy.random.SeedSequence`, so the same
(seed, path) always yields the same stream no matter which worker runs it or in
which order sibling computations execute.
"""

import hashlib
from functools import lru_cache
from typing import Union

import numpy as np

PathPart = Union[str, int]


@lru_cache(maxsize=100_000)
def _path_words(path: tuple) -> tuple:
    content = ":".join(str(part) for part in path)
    digest = hashlib.sha256(content.encode()).digest()
    return tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4))


def derive_seed(seed: int, *path: PathPart) -> int:
    """Derive a 63-bit integer seed for a named sub-computation.

    Args:
        seed: Top-level run seed
        *path: Path parts, e.g. ``"kmeans", "restart", 3``

    Returns:
        Non-negative integer seed
    """
    sequence = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *_path_words(tuple(path))])
    return int(sequence.generate_state(2, dtype=np.uint64)[0] >> np.uint64(1))


def derive_rng(seed: int, *path: PathPart) -> np.random.Generator:
    """Derive an independent random generator for a named sub-computation.

    Args:
        seed: Top-level run seed
        *path: Path parts identifying the computation

    Returns:
        numpy Generator seeded from (seed, path)
    """
    return np.random.default_rng(derive_seed(seed, *path))
