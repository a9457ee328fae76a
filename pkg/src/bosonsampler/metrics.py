"""Distances between discrete output distributions."""

from __future__ import annotations

import math

from .distribution import OutputDistribution


def _check_comparable(a: OutputDistribution, b: OutputDistribution) -> None:
    if a.modes != b.modes:
        raise ValueError(
            f"distributions over different mode counts: {a.modes} vs {b.modes}"
        )


def total_variation_distance(a: OutputDistribution, b: OutputDistribution) -> float:
    """Half the L1 distance; missing configurations count as probability 0."""
    _check_comparable(a, b)
    keys = sorted(set(a.probabilities) | set(b.probabilities), reverse=True)
    return 0.5 * math.fsum(abs(a.probability(k) - b.probability(k)) for k in keys)


def bhattacharyya_fidelity(a: OutputDistribution, b: OutputDistribution) -> float:
    """Sum of sqrt(P_a * P_b); 1 iff the distributions are equal.

    Bounds the total variation distance both ways:
    1 - F <= TVD <= sqrt(1 - F^2).
    """
    _check_comparable(a, b)
    keys = sorted(set(a.probabilities) | set(b.probabilities), reverse=True)
    return math.fsum(math.sqrt(a.probability(k) * b.probability(k)) for k in keys)
