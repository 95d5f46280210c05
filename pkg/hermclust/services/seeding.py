# hermclust/services/seeding.py
"""
Seed splitting. Every random draw in the package comes from a
``numpy.random.Generator(PCG64)`` built from a ``SeedSequence`` whose spawn
key names the consumer, so results do not depend on call order, thread
count or platform.

    master seed s, stage name "eigen", split index i
        -> SeedSequence(s, spawn_key=(STAGE["eigen"], i))
"""
from __future__ import annotations

import numpy as np

STAGES = {
    "init": 1,
    "eigen": 2,
    "kmeans": 3,
    "sample-row": 4,
    "shuffle": 5,
    "replicate": 6,
}


def stage_sequence(seed: int, stage: str, *index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed) & ((1 << 64) - 1), spawn_key=(STAGES[stage], *index))


def stage_rng(seed: int, stage: str, *index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(stage_sequence(seed, stage, *index)))


def stage_seed(seed: int, stage: str, *index: int) -> int:
    """A derived 32-bit integer seed, for APIs that only take ints (scikit-learn)."""
    return int(stage_sequence(seed, stage, *index).generate_state(1, dtype=np.uint32)[0])
