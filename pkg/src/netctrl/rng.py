"""Deterministic random-stream derivation.

Every randomized routine takes an explicit integer seed and derives its own
independent stream from (seed, stream tag, indices...). Streams never depend
on call order or scheduling, so reruns and any future parallel mapping agree
bit for bit.
"""

from __future__ import annotations

import numpy as np

# Stream tags; one per randomized role so derived streams never collide.
GENERATE = 0
ATTACK = 1
RECTIFY = 2
HETEROGENEITY = 3
DISCONNECT = 4
ADJUST = 5
EXPERIMENT = 6


def spawn_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream addressed by (seed, *key)."""
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(seq))


def derive_seed(seed: int, *key: int) -> int:
    """Stable 63-bit child seed for handing to APIs that want a plain int."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(seq.generate_state(1, np.uint64)[0] >> 1)
