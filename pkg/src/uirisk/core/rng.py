"""
Named random streams.

Every randomized operation draws from its own stream, keyed by the master
seed, a dotted stream name (module.operation) and optional integer keys,
so results do not depend on call order or worker scheduling.
"""

import hashlib

import numpy as np


def _name_words(name: str) -> tuple[int, ...]:
    digest = hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest()
    return (int.from_bytes(digest[:4], "little"), int.from_bytes(digest[4:], "little"))


def stream(seed: int, name: str, *keys: int) -> np.random.Generator:
    """Return the generator for (seed, name, keys)."""
    spawn_key = _name_words(name) + tuple(int(k) for k in keys)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=spawn_key)))
