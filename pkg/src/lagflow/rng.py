"""Counter-based pseudo-random generator for reproducible experiment suites.

The generator is stateless in the usual sense: draw ``k`` is a pure function
of ``(seed, k)``,

    value(k) = mix64(seed + k * GOLDEN)   (all arithmetic mod 2**64)

where ``mix64`` is the SplitMix64 finalizer

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

and ``GOLDEN = 0x9E3779B97F4A7C15``.  Uniform variates map the top 53 bits to
[0, 1); "Gaussian-ish" variates are the Irwin-Hall sum of 12 uniforms minus 6
(mean 0, variance 1, support [-6, 6]).  Every transform is plain integer and
float arithmetic, so any language can reproduce the streams bit for bit.

Counter bookkeeping: a ``CounterRng`` hands out consecutive counters, and
``at(counter)`` jumps to an absolute position, which lets callers give each
trial a fixed, documented counter window.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

# One Gaussian-ish variate consumes this many raw counters.
DRAWS_PER_GAUSSIAN = 12


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer, vectorized over a uint64 array."""
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


class CounterRng:
    """Deterministic stream of uniforms/gaussians addressed by (seed, counter)."""

    def __init__(self, seed: int, counter: int = 0):
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {seed}")
        self.seed = int(seed)
        self.counter = int(counter)

    def at(self, counter: int) -> "CounterRng":
        """A view of the same stream positioned at an absolute counter."""
        return CounterRng(self.seed, counter)

    def raw(self, count: int) -> np.ndarray:
        """Next ``count`` raw 64-bit words."""
        counters = np.arange(self.counter, self.counter + count, dtype=np.uint64)
        self.counter += count
        return mix64(np.uint64(self.seed) + counters * GOLDEN)

    def uniforms(self, count: int) -> np.ndarray:
        """Uniform floats in [0, 1), 53-bit resolution."""
        return (self.raw(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def gaussians(self, count: int) -> np.ndarray:
        """Irwin-Hall(12) variates: mean 0, variance 1, bounded by +/-6."""
        u = self.uniforms(count * DRAWS_PER_GAUSSIAN)
        return u.reshape(count, DRAWS_PER_GAUSSIAN).sum(axis=1) - 6.0
