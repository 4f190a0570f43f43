"""Seeded stream derivation for reproducible, order-independent sampling.

Streams use the counter-based Philox generator. Stream i of a master
seed is keyed by ``SeedSequence(master_seed, spawn_key=(i,))``, so any
subset of streams can be generated in any order (or in parallel) and
still produce identical values.

Bit-identical output is guaranteed for a fixed numpy version on one
platform; numpy's bit streams have historically been stable across
platforms as well, but that is numpy's contract, not ours.
"""

import numpy as np


def generator(master_seed: int, *stream: int) -> np.random.Generator:
    """Philox generator for the given master seed and stream indices."""
    seq = np.random.SeedSequence(master_seed, spawn_key=stream)
    return np.random.Generator(np.random.Philox(seq))
