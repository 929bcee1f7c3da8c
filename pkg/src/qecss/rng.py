"""Seeding conventions.

One splittable generator family (PCG64 behind numpy's ``default_rng``) is used
repo-wide.  Independent work units (restarts, sweep grid points) derive their
generators via ``SeedSequence(entropy=seed, spawn_key=(index,))`` so results do
not depend on execution order or thread schedule.
"""
from __future__ import annotations

import numpy as np

RngLike = "int | np.random.Generator | np.random.SeedSequence | None"


def as_generator(rng) -> np.random.Generator:
    """Coerce an int seed, SeedSequence, Generator or None to a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def spawned_generator(seed: int, *key: int) -> np.random.Generator:
    """Generator for work unit ``key`` derived deterministically from ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def spawned_seed(seed: int, *key: int) -> int:
    """A 64-bit integer seed derived from (seed, key), for nested searches."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])
