"""SplitMix64, the seeded generator behind every random coloring.

The sequence is fixed so any implementation can reproduce a run: the state
starts at the seed, each step adds 0x9E3779B97F4A7C15 (mod 2**64) and the
output is the state passed through the standard SplitMix64 finalizer.

A coloring of n items consumes ceil(n / 64) outputs; item i (1-based) takes
bit (i - 1) % 64, least significant first, of output (i - 1) // 64.
"""
from __future__ import annotations

from typing import List

from .setcore import Coloring

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def coloring(self, n: int) -> Coloring:
        bits: List[int] = []
        while len(bits) < n:
            word = self.next_u64()
            bits.extend((word >> b) & 1 for b in range(min(64, n - len(bits))))
        return tuple(bits)
