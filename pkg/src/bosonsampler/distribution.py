"""Exact output distributions of photons through a linear interferometer.

The transition amplitude from input configuration T to output configuration
S under unitary U is

    amp(S) = Per(U[S, T]) / sqrt(prod_i S_i! * prod_j T_j!)

where U[S, T] is the scattering submatrix with repeated rows/columns.  The
normalization constant is confirmed by the fact that the resulting
probabilities sum to 1 over the full configuration space; that sum is
asserted, never silently renormalized, so an amplitude bug cannot hide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fock import (
    DEFAULT_GUARD_LIMIT,
    enumerate_configurations,
    occupancy_factorial_product,
    total_photons,
)
from .permanent import build_scattering_submatrix, permanent_ryser

NORMALIZATION_TOL = 1e-9
AMPLITUDE_CONSISTENCY_TOL = 1e-12


class NormalizationError(ArithmeticError):
    """Probabilities failed to sum to 1; signals an implementation bug."""


@dataclass
class OutputDistribution:
    """Normalized map from configurations to probabilities.

    ``amplitudes`` is present only for pure-input (coherent) distributions;
    mixtures and thinned distributions carry probabilities alone.  Keys of a
    fixed-photon-number distribution all share one total; loss channels and
    number-noise mixtures legitimately mix totals.
    """

    modes: int
    probabilities: dict[tuple[int, ...], float]
    amplitudes: dict[tuple[int, ...], complex] | None = field(default=None)

    def probability(self, occupation) -> float:
        return self.probabilities.get(tuple(occupation), 0.0)

    def configurations(self) -> list[tuple[int, ...]]:
        """Support in canonical (descending lexicographic) order."""
        return sorted(self.probabilities, reverse=True)

    def total_probability(self) -> float:
        return math.fsum(self.probabilities[key] for key in self.configurations())

    def photon_total(self) -> int | None:
        """Common photon total of all keys, or None if totals are mixed."""
        totals = {total_photons(key) for key in self.probabilities}
        if len(totals) == 1:
            return totals.pop()
        return None

    def expected_total_photons(self) -> float:
        return math.fsum(
            self.probabilities[key] * total_photons(key)
            for key in self.configurations()
        )

    def validate(self, tol: float = NORMALIZATION_TOL) -> None:
        for key, prob in self.probabilities.items():
            if len(key) != self.modes:
                raise ValueError(f"configuration {key} has wrong mode count")
            if not -1e-15 <= prob <= 1 + 1e-12:
                raise ValueError(f"probability {prob} for {key} out of [0, 1]")
        total = self.total_probability()
        if abs(total - 1.0) > tol:
            raise NormalizationError(
                f"probabilities sum to {total!r}, deviating from 1 by more than {tol}"
            )
        if self.amplitudes is not None:
            for key, amp in self.amplitudes.items():
                if abs(self.probabilities.get(key, 0.0) - abs(amp) ** 2) > AMPLITUDE_CONSISTENCY_TOL:
                    raise ValueError(
                        f"probability of {key} inconsistent with |amplitude|^2"
                    )


def amplitude(u, input_occupation, output_occupation) -> complex:
    """Transition amplitude between two configurations of equal photon total."""
    submatrix = build_scattering_submatrix(u, input_occupation, output_occupation)
    norm = occupancy_factorial_product(input_occupation) * occupancy_factorial_product(
        output_occupation
    )
    return permanent_ryser(submatrix) / math.sqrt(norm)


def output_distribution(
    u, input_occupation, guard_limit: int = DEFAULT_GUARD_LIMIT
) -> OutputDistribution:
    """Exact ideal distribution over every output configuration.

    Computes the amplitude for each of the C(n+m-1, m-1) configurations by
    dense enumeration (no truncation) and asserts normalization.
    """
    mat = np.asarray(u, dtype=complex)
    occ = tuple(input_occupation)
    m = len(occ)
    if mat.shape != (m, m):
        raise ValueError(
            f"unitary shape {mat.shape} does not match mode count {m}"
        )
    n = total_photons(occ)
    configurations = enumerate_configurations(n, m, guard_limit=guard_limit)
    amplitudes: dict[tuple[int, ...], complex] = {}
    probabilities: dict[tuple[int, ...], float] = {}
    for out in configurations:
        amp = amplitude(mat, occ, out)
        amplitudes[out] = amp
        probabilities[out] = abs(amp) ** 2
    dist = OutputDistribution(m, probabilities, amplitudes)
    dist.validate()
    return dist
