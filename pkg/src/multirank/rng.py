"""Deterministic random numbers for seeded corpora.

SplitMix64: 64-bit state, the reference output function of Steele, Lea and
Flood's splittable generator. Chosen because its output is a pure function
of a 64-bit integer state, so identical seeds give identical streams on
every platform and Python version. Draws below a bound use rejection
sampling and are exactly uniform.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def int_between(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends included."""
        return lo + self.below(hi - lo + 1)

    def split(self) -> "SplitMix64":
        """Child generator with a state derived from the next draw."""
        return SplitMix64(self.next_u64())
