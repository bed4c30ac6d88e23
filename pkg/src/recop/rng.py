"""Deterministic pseudo-random numbers (SplitMix64).

The generator is fully specified (docs/prng.md) so that a seed written
into a problem file reproduces the same sample points on any platform
and in any implementation of this tool:

  state <- (state + 0x9E3779B97F4A7C15) mod 2^64
  z <- state; z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
  z <- (z xor (z >> 27)) * 0x94D049BB133111EB mod 2^64
  output z xor (z >> 31)

Uniform doubles take the top 53 bits / 2^53; normals use Box-Muller on
two uniforms (the first mapped into (0, 1]), returning the cosine branch
first and caching the sine branch.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK
        self._cached_normal: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform01(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.uniform01()

    def normal(self) -> float:
        """Standard normal via Box-Muller."""
        if self._cached_normal is not None:
            value = self._cached_normal
            self._cached_normal = None
            return value
        u1 = ((self.next_u64() >> 11) + 1) * (1.0 / (1 << 53))  # in (0, 1]
        u2 = self.uniform01()
        radius = math.sqrt(-2.0 * math.log(u1))
        self._cached_normal = radius * math.sin(2.0 * math.pi * u2)
        return radius * math.cos(2.0 * math.pi * u2)
