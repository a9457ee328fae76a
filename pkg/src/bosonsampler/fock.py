"""Photon-number configurations: enumeration, ranking and factorial bookkeeping.

A configuration (one detection event, or one input pattern) is represented
throughout the package as a plain tuple of non-negative ints, one entry per
mode.  The full output space of ``n`` photons in ``m`` modes is the set of
weak compositions of ``n`` into ``m`` parts; it has ``C(n+m-1, m-1)``
elements and is always enumerated in descending lexicographic order, so
ranks and file output are stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_GUARD_LIMIT = 2_000_000
MAX_FACTORIAL_COUNT = 20


class GuardLimitError(ValueError):
    """A requested computation exceeds a configured size guard.

    ``count`` carries the offending size (e.g. the would-be number of
    configurations) when it is known.
    """

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


def configuration_count(n: int, m: int) -> int:
    """Number of ways to place n photons in m modes, C(n+m-1, m-1)."""
    return math.comb(n + m - 1, m - 1)


def total_photons(occupation) -> int:
    """Total photon number of a configuration."""
    return sum(occupation)


def validate_occupation(occupation) -> tuple[int, ...]:
    """Check entries are non-negative ints and return the canonical tuple."""
    occ = tuple(occupation)
    if len(occ) == 0:
        raise ValueError("occupation must have at least one mode")
    for c in occ:
        if not isinstance(c, (int,)) or isinstance(c, bool) or c < 0:
            raise ValueError(f"occupation entries must be non-negative ints, got {occ}")
    return occ


def occupation_to_modes(occupation) -> list[int]:
    """Flatten a configuration into one mode index per photon.

    Example: (2, 0, 1) -> [0, 0, 2].
    """
    modes = []
    for i, c in enumerate(occupation):
        modes.extend([i] * c)
    return modes


def format_occupation(occupation) -> str:
    """Serialize a configuration as a comma-separated integer list."""
    return ",".join(str(int(c)) for c in occupation)


def parse_occupation(text: str) -> tuple[int, ...]:
    """Inverse of :func:`format_occupation`."""
    return validate_occupation(int(part) for part in text.split(","))


@dataclass(frozen=True)
class ExperimentShape:
    """Photon count n and mode count m of one experiment.

    The ideal input occupies the first n of m modes with one photon each,
    so 1 <= n <= m is required.
    """

    n: int
    m: int

    def __post_init__(self):
        if not (1 <= self.n <= self.m):
            raise ValueError(f"need 1 <= n <= m, got n={self.n}, m={self.m}")

    @property
    def input_occupation(self) -> tuple[int, ...]:
        """The ideal input configuration |1,...,1,0,...,0>."""
        return (1,) * self.n + (0,) * (self.m - self.n)

    def configuration_count(self) -> int:
        return configuration_count(self.n, self.m)

    def check_guard(self, guard_limit: int = DEFAULT_GUARD_LIMIT) -> None:
        count = self.configuration_count()
        if count > guard_limit:
            raise GuardLimitError(
                f"{count} configurations for n={self.n}, m={self.m} "
                f"exceeds guard limit {guard_limit}",
                count=count,
            )


def enumerate_configurations(
    n: int, m: int, guard_limit: int = DEFAULT_GUARD_LIMIT
) -> list[tuple[int, ...]]:
    """All weak compositions of n photons into m modes, descending lexicographic.

    Parameters
    ----------
    n : total photon count (>= 0)
    m : mode count (>= 1)
    guard_limit : maximum allowed number of configurations

    Returns
    -------
    list of tuples of length m, each summing to n; the list has
    C(n+m-1, m-1) entries and starts at (n, 0, ..., 0).
    """
    if n < 0:
        raise ValueError(f"photon count must be >= 0, got {n}")
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    count = configuration_count(n, m)
    if count > guard_limit:
        raise GuardLimitError(
            f"{count} configurations for n={n}, m={m} exceeds guard limit {guard_limit}",
            count=count,
        )

    if m == 1:
        return [(n,)]
    current = [n] + [0] * (m - 1)
    out = [tuple(current)]
    while current[-1] < n:
        # Successor in descending lex order: decrement the rightmost
        # non-terminal nonzero entry, dump everything after it into the
        # next slot.
        i = max(j for j in range(m - 1) if current[j] > 0)
        current[i] -= 1
        rest = n - sum(current[: i + 1])
        for j in range(i + 1, m):
            current[j] = 0
        current[i + 1] = rest
        out.append(tuple(current))
    return out


def configuration_rank(occupation) -> int:
    """Dense index of a configuration within its enumeration.

    Bijective with :func:`enumerate_configurations` order:
    ``configuration_rank(enumerate_configurations(n, m)[k]) == k``.
    """
    occ = validate_occupation(occupation)
    m = len(occ)
    remaining = sum(occ)
    rank = 0
    for i, c in enumerate(occ[:-1]):
        parts = m - i - 1
        # Configurations with a larger entry at slot i all come first;
        # hockey-stick identity collapses their count to one binomial.
        if c < remaining:
            rank += math.comb(remaining - c - 1 + parts, parts)
        remaining -= c
    return rank


def configuration_unrank(rank: int, n: int, m: int) -> tuple[int, ...]:
    """Configuration at position ``rank`` of the (n, m) enumeration."""
    if not 0 <= rank < configuration_count(n, m):
        raise ValueError(f"rank {rank} out of range for n={n}, m={m}")
    occ = []
    remaining = n
    for i in range(m - 1):
        parts = m - i - 1
        for c in range(remaining, -1, -1):
            block = configuration_count(remaining - c, parts)
            if rank < block:
                occ.append(c)
                remaining -= c
                break
            rank -= block
    occ.append(remaining)
    return tuple(occ)


def occupancy_factorial_product(occupation) -> int:
    """Product of factorials of the per-mode counts, exactly.

    This is the combinatorial normalization that repeated-row/column
    permanents pick up for bunched configurations.
    """
    occ = validate_occupation(occupation)
    for c in occ:
        if c > MAX_FACTORIAL_COUNT:
            raise GuardLimitError(
                f"per-mode count {c} exceeds exact-factorial guard "
                f"{MAX_FACTORIAL_COUNT}",
                count=c,
            )
    product = 1
    for c in occ:
        product *= math.factorial(c)
    return product
