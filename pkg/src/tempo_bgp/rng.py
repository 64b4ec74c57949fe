"""Seedable, portable pseudo-random numbers (splitmix64).

The generator is pinned to a concrete algorithm rather than the stdlib's
Mersenne twister so that synthetic datasets can be regenerated bit-for-bit
from a seed by any implementation, in any language.

State update and output finalizer:

    state  = (state + 0x9E3779B97F4A7C15) mod 2^64
    z      = state
    z      = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z      = (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output = z XOR (z >> 31)

``random()`` maps the top 53 bits to [0, 1); ``randint(lo, hi)`` reduces a
raw draw modulo the range width (the bias is irrelevant at the range sizes
used here and keeps the algorithm trivially portable).
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """The splitmix64 output finalizer, usable as a standalone hash."""
    z = x & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential splitmix64 stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive on both ends."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]


def substream(seed: int, index: int) -> SplitMix64:
    """Independent deterministic stream for item ``index`` under ``seed``.

    Used by the graph generator so that each potential edge owns its own
    draw sequence: changing density thresholds or snapshot counts never
    shifts the randomness of unrelated edges.
    """
    return SplitMix64(mix64((seed & _MASK) ^ mix64(index + 1)))
