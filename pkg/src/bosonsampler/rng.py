"""Deterministic random streams.

All randomness in the package flows through Philox, a counter-based 64-bit
generator, keyed explicitly by (seed, stream).  Identical (seed, stream)
pairs give identical sample sequences on every platform; distinct stream
ids give independent streams, so concurrent trials never share generator
state implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RandomSeed:
    """A 64-bit seed plus a stream id selecting one Philox key."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        if not 0 <= self.stream <= _MASK64:
            raise ValueError(f"stream must fit in 64 bits, got {self.stream}")

    def split(self, stream: int) -> "RandomSeed":
        """Same seed, different stream."""
        return RandomSeed(self.seed, stream)

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def as_seed(seed) -> RandomSeed:
    """Coerce an int or RandomSeed into a RandomSeed (stream 0 for ints)."""
    if isinstance(seed, RandomSeed):
        return seed
    return RandomSeed(int(seed))
