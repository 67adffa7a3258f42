"""Deterministic seed derivation for named random substreams.

Every stochastic stage draws from its own generator seeded by hashing the
run seed together with a stage label. Streams are therefore independent of
each other and of execution order, which keeps parallel runs reproducible.
Hashing uses SHA-256 rather than ``hash()`` because the latter is salted
per process.
"""

import hashlib

import numpy as np


def derive_seed(seed, *labels):
    """Derive a child seed from a parent seed and a label path.

    Args:
        seed: parent seed, a non-negative integer.
        labels: path of strings or integers naming the substream.

    Returns:
        An integer in [0, 2**64) usable as a generator seed.
    """
    if int(seed) < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    digest = hashlib.sha256()
    digest.update(str(int(seed)).encode())
    for label in labels:
        digest.update(b"/")
        digest.update(str(label).encode())
    return int.from_bytes(digest.digest()[:8], "big")


def substream(seed, *labels):
    """Return a ``numpy`` Generator seeded for the named substream."""
    return np.random.default_rng(derive_seed(seed, *labels))
