"""SplitMix64 pseudo-random stream.

The generator is fixed so that any implementation can reproduce the same
stream from the same seed::

    state  <- (state + 0x9E3779B97F4A7C15) mod 2**64
    z      <- state
    z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2**64
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB   mod 2**64
    output <- z ^ (z >> 31)

Doubles in [0, 1) are ``(output >> 11) * 2**-53``.  Normal deviates use the
cosine branch of Box-Muller on two consecutive uniforms ``u1, u2``:
``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)``.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class SplitMix64:
    """Explicit-state SplitMix64 generator; no global state."""

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)
        return low + (high - low) * u

    def normal(self) -> float:
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log1p(-u1)) * math.cos(2.0 * math.pi * u2)

    def uniforms(self, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return np.array([self.uniform(low, high) for _ in range(n)])

    def normals(self, n: int) -> np.ndarray:
        return np.array([self.normal() for _ in range(n)])

    def unit_vector(self, dim: int) -> np.ndarray:
        """Uniformly distributed point on the unit sphere in ``dim`` dimensions."""
        while True:
            v = self.normals(dim)
            norm = float(np.linalg.norm(v))
            if norm > 1e-12:
                return v / norm
