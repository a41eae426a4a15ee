"""Pinned, seedable random source used everywhere randomness is needed.

The generator is a SplitMix64 counter sequence: output ``i`` is
``mix64(seed + (i + 1) * GOLDEN_GAMMA)`` where ``mix64`` is the standard
SplitMix64 finalizer.  Being counter-based (no serial state recurrence),
the same draw sequence can be produced one value at a time or in bulk
numpy blocks, bit-for-bit identical.  The platform default RNG is never
used, so streams and models replay exactly for a given seed.

Gaussians come from the trigonometric Box-Muller transform applied to
consecutive uniform pairs; no rejection step, so uniform consumption per
gaussian is fixed and vectorizable.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_MUL_1 = 0xBF58476D1CE4E5B9
_MIX_MUL_2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53


def mix64(value: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer (Python int path)."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * _MIX_MUL_1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_MUL_2) & MASK64
    return z ^ (z >> 31)


def _mix64_block(values: np.ndarray) -> np.ndarray:
    z = values.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX_MUL_1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX_MUL_2)
    z ^= z >> np.uint64(31)
    return z


class Rng:
    """Deterministic 64-bit random source with scalar and block draws.

    Scalar and block methods consume the same counter sequence, so any
    interleaving of calls is reproducible from the seed alone.
    """

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._counter = 0

    # -- raw 64-bit outputs ------------------------------------------------

    def u64(self) -> int:
        self._counter += 1
        return mix64((self.seed + self._counter * GOLDEN_GAMMA) & MASK64)

    def u64_block(self, n: int) -> np.ndarray:
        start = self._counter + 1
        self._counter += n
        counters = np.arange(start, start + n, dtype=np.uint64)
        counters *= np.uint64(GOLDEN_GAMMA)
        counters += np.uint64(self.seed)
        return _mix64_block(counters)

    # -- uniforms ----------------------------------------------------------

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.u64() >> 11) * _INV_2_53

    def uniform_block(self, n: int) -> np.ndarray:
        return (self.u64_block(n) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def randint(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        return min(int(self.uniform() * bound), bound - 1)

    def randint_block(self, n: int, bound: int) -> np.ndarray:
        draws = (self.uniform_block(n) * bound).astype(np.int64)
        return np.minimum(draws, bound - 1)

    # -- gaussians ---------------------------------------------------------

    def gauss_block(self, n: int) -> np.ndarray:
        """Standard normals via Box-Muller over consecutive uniform pairs."""
        pairs = (n + 1) // 2
        u = self.uniform_block(2 * pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        theta = (2.0 * math.pi) * u[1::2]
        out = np.empty(2 * pairs, dtype=np.float64)
        out[0::2] = radius * np.cos(theta)
        out[1::2] = radius * np.sin(theta)
        return out[:n]

    # -- reordering helpers ------------------------------------------------

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> np.ndarray:
        idx = list(range(n))
        self.shuffle(idx)
        return np.asarray(idx, dtype=np.int64)

    def spawn(self) -> "Rng":
        """Derive an independent child generator (e.g. one per ensemble member)."""
        return Rng(self.u64())
