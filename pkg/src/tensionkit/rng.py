"""Deterministic named randomness streams.

All randomness in the toolkit flows from one 64-bit master seed.  Each
consumer derives its own stream keyed by a purpose name, so adding or
removing one consumer never perturbs the draws seen by another.
"""

from __future__ import annotations

import numpy as np


def _sequence(master_seed: int, name: str) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed & 0xFFFFFFFFFFFFFFFF, *name.encode("utf-8")])


def derive_seed(master_seed: int, name: str) -> int:
    """A stable 64-bit child seed for the given purpose name."""
    return int(_sequence(master_seed, name).generate_state(1, np.uint64)[0])


def derive_rng(master_seed: int, name: str) -> np.random.Generator:
    """A generator seeded for the given purpose name."""
    return np.random.default_rng(_sequence(master_seed, name))
