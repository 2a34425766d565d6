"""Deterministic RNG derivation.

All randomness flows from one user seed; named sub-streams are derived with a
stable hash of the stream key so results do not depend on call order or on
Python's per-process string hashing.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _key_words(key: str) -> list[int]:
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]


def derive_rng(seed: int | None, key: str = "") -> np.random.Generator:
    """Generator for the sub-stream ``key`` of ``seed`` (``None`` means seed 0)."""
    base = (0 if seed is None else int(seed)) % 2**64
    return np.random.default_rng(np.random.SeedSequence([base & 0xFFFFFFFF, base >> 32, *_key_words(key)]))


def as_rng(seed) -> np.random.Generator:
    """Accept a Generator, an int seed, or ``None``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return derive_rng(seed)
