"""Deterministic per-stream seeds derived from a 64-bit master seed."""

import numpy as np

__all__ = ["MASK64", "splitmix64", "derive_seed", "stream_rng"]

MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One splitmix64 output for the given 64-bit state."""
    z = (state + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed of stream ``index`` under master ``seed``: mix the seed, then fold the index in and mix again."""
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return splitmix64(splitmix64(seed) ^ (index & MASK64))


def stream_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, index))
