"""Deterministic pseudorandom primitives shared by all samplers.

Everything in this package draws randomness from a SplitMix64 stream so
that results are bit-identical across platforms and numpy versions. The
scalar helpers are numba-compatible and are used inside jitted kernels;
the vectorised helpers run the same generator in counter mode for bulk
draws.
"""

from __future__ import annotations

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_INV53 = 1.0 / float(1 << 53)


@njit(cache=True, inline="always")
def splitmix64(x):
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z = (x + GOLDEN) & _U64
    z = ((z ^ (z >> np.uint64(30))) * _MIX1) & _U64
    z = ((z ^ (z >> np.uint64(27))) * _MIX2) & _U64
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def next_u64(state):
    """Advance a one-word SplitMix64 state; returns (output, new_state)."""
    new_state = (state + GOLDEN) & _U64
    z = (new_state ^ (new_state >> np.uint64(30))) * _MIX1 & _U64
    z = (z ^ (z >> np.uint64(27))) * _MIX2 & _U64
    return z ^ (z >> np.uint64(31)), new_state


@njit(cache=True, inline="always")
def next_double(state):
    """Uniform double in [0, 1) from the top 53 bits."""
    z, state = next_u64(state)
    return float(z >> np.uint64(11)) * _INV53, state


@njit(cache=True, inline="always")
def next_below(state, n):
    """Unbiased integer in [0, n) via masked rejection."""
    # mask = smallest 2^k - 1 >= n - 1
    mask = np.uint64(n - 1)
    mask |= mask >> np.uint64(1)
    mask |= mask >> np.uint64(2)
    mask |= mask >> np.uint64(4)
    mask |= mask >> np.uint64(8)
    mask |= mask >> np.uint64(16)
    mask |= mask >> np.uint64(32)
    while True:
        z, state = next_u64(state)
        r = z & mask
        if r < np.uint64(n):
            return np.int64(r), state


def splitmix64_py(x: int) -> int:
    """Pure-Python SplitMix64 finalizer (same output as the jitted one)."""
    mask = 0xFFFFFFFFFFFFFFFF
    z = (x + 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return z ^ (z >> 31)


def uniforms(seed: int, n: int) -> np.ndarray:
    """Vectorised counter-mode SplitMix64 stream of n doubles in [0, 1).

    Output i equals the i-th draw of the scalar stream seeded with ``seed``.
    """
    state = (np.uint64(seed) + (np.arange(1, n + 1, dtype=np.uint64)) * GOLDEN) & _U64
    z = state
    z = ((z ^ (z >> np.uint64(30))) * _MIX1) & _U64
    z = ((z ^ (z >> np.uint64(27))) * _MIX2) & _U64
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV53
