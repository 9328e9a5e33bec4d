"""Deterministic seed derivation for trial-parallel Monte Carlo.

Per-trial seeds are derived from a master seed with the splitmix64 finalizer,
a published integer mixer with good avalanche behavior.  Derivation is pure
arithmetic, so a trial's stream depends only on (master_seed, trial_index) —
never on scheduling order or worker count.
"""
from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(master_seed: int, index: int) -> int:
    """splitmix64 output for stream position ``index`` of ``master_seed``."""
    z = (int(master_seed) + (int(index) + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def rng_from(seed: int) -> np.random.Generator:
    """PCG64 generator seeded directly (bit-reproducible across platforms)."""
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


def trial_seed(master_seed: int, trial_index: int) -> int:
    return mix64(master_seed, trial_index)


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    return rng_from(trial_seed(master_seed, trial_index))
