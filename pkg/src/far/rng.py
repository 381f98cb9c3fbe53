"""Deterministic pseudo-random numbers, pinned to a named public algorithm.

The generator is xoshiro256** (Blackman & Vigna), with its 256-bit state
expanded from a 64-bit seed by splitmix64. Doubles in [0, 1) are formed as
``(next_u64() >> 11) * 2.0**-53``; integers in [0, n) as
``floor(uniform() * n)``; normals by the Box-Muller transform on two
uniforms. Every seeded output of the package flows through this module, so
fills, scenes, sample plans, and stem weights are bit-reproducible across
platforms and runs.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, (z ^ (z >> 31)) & _MASK64


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** seeded via splitmix64 expansion of a 64-bit seed."""

    def __init__(self, seed: int):
        sm = seed & _MASK64
        s = []
        for _ in range(4):
            sm, out = splitmix64_next(sm)
            s.append(out)
        if not any(s):  # all-zero state is the one invalid state
            s[0] = 1
        self._s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        """Double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + self.uniform() * (hi - lo)

    def integer(self, n: int) -> int:
        """Integer in [0, n); n must be positive and well below 2**53."""
        if n <= 0:
            raise ValueError("integer bound must be positive")
        return min(int(self.uniform() * n), n - 1)

    def normal(self) -> float:
        """Standard normal via Box-Muller (cosine branch, no caching)."""
        u1 = (self.next_u64() >> 11) + 1  # in [1, 2**53]: keeps log finite
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1 * 2.0**-53))
        return r * math.cos(2.0 * math.pi * u2)

    def uniforms(self, count: int, lo: float = 0.0, hi: float = 1.0) -> list[float]:
        return [self.uniform_in(lo, hi) for _ in range(count)]

    def normals(self, count: int, sigma: float = 1.0) -> list[float]:
        return [sigma * self.normal() for _ in range(count)]
