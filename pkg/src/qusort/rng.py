"""SplitMix64 counter-based generator used for shot sampling.

The stream is fully specified here so that shot counts can be reproduced
bit-for-bit by any implementation:

    state_0 = seed                              (unsigned 64-bit)
    state_i = state_{i-1} + 0x9E3779B97F4A7C15  (mod 2**64)
    z = state_i
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9    (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB    (mod 2**64)
    out_i = z ^ (z >> 31)                       for i = 1, 2, ...

A uniform double in [0, 1) is formed from the top 53 bits:
``u_i = (out_i >> 11) * 2**-53``.

Because ``state_i = seed + i * GOLDEN`` the stream is counter-based, which
lets the numpy path generate it without a Python loop.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1
INV_2_53 = 1.0 / (1 << 53)


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def splitmix64(seed: int, n: int) -> np.ndarray:
    """Return the first ``n`` outputs of the stream as a uint64 array."""
    seed = check_seed(seed)
    if n < 0:
        raise ValueError("n must be non-negative")
    counter = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + counter * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, n: int) -> np.ndarray:
    """Uniform doubles in [0, 1) drawn from the top 53 bits of each output."""
    return (splitmix64(seed, n) >> np.uint64(11)).astype(np.float64) * INV_2_53
