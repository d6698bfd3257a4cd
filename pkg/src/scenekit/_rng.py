"""Seeding discipline for every stochastic operation.

All randomness flows through numpy's Philox bit generator (a counter-based
RNG) keyed by a SeedSequence, which gives cross-platform, bit-stable streams.
Composite operations derive one independent child stream per step via spawn
keys, so inserting or skipping a step never shifts another step's stream.
"""

from __future__ import annotations

import numpy as np


def rng_from_seed(seed: int, *spawn_key: int) -> np.random.Generator:
    """Philox generator for ``seed``, optionally in a spawned substream."""
    ss = np.random.SeedSequence(seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(ss))
