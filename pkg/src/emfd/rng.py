"""Deterministic random streams for the verification suites.

A fixed 64-bit linear congruential generator is used instead of the stdlib so
the exact instance stream can be reproduced from any language:

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64

Each draw advances the state once and returns its top 32 bits.  Bounded draws
reduce a single 32-bit output modulo the range (the tiny modulo bias is
irrelevant here; reproducibility is the point).
"""

from __future__ import annotations

__all__ = ["DEFAULT_SEED", "Lcg"]

DEFAULT_SEED = 12345

_A = 6364136223846793005
_C = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed: int = DEFAULT_SEED):
        self.state = seed & _MASK

    def next_u32(self) -> int:
        self.state = (_A * self.state + _C) & _MASK
        return self.state >> 32

    def below(self, n: int) -> int:
        """Uniform-ish draw in [0, n)."""
        assert n >= 1
        return self.next_u32() % n

    def int_between(self, lo: int, hi: int) -> int:
        """Inclusive on both ends."""
        assert lo <= hi
        return lo + self.below(hi - lo + 1)

    def sign(self) -> int:
        return 1 if self.below(2) == 0 else -1

    def pick(self, seq):
        return seq[self.below(len(seq))]
