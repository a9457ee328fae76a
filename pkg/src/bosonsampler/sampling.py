"""Seeded sampling from exact distributions, noisy trials and post-selection.

Post-selection is deliberately blind to the input branch: an experimenter
only sees the detected photon total, so a run kept because it shows n
photons may have come from a branch where one source fired twice while
another stayed dark.  Branch labels are carried on each sample purely for
diagnostics and never consulted by the post-selection logic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import OutputDistribution
from .fock import DEFAULT_GUARD_LIMIT, ExperimentShape, total_photons
from .noise import (
    InputBranch,
    NoiseModel,
    apply_loss,
    branch_output_distribution,
    input_ensemble,
)
from .rng import RandomSeed, as_seed

__all__ = [
    "RandomSeed",
    "SampleRecord",
    "sample_exact",
    "sample_noisy",
    "postselect",
    "postselected_distribution",
]


@dataclass(frozen=True)
class SampleRecord:
    """One measured trial: the outcome plus diagnostic branch provenance."""

    trial: int
    outcome: tuple[int, ...]
    branch: InputBranch
    branch_ideal: bool


def _inverse_cdf_table(probabilities: dict) -> tuple[list[tuple[int, ...]], np.ndarray]:
    order = sorted(probabilities, reverse=True)
    cdf = np.cumsum([probabilities[key] for key in order])
    return order, cdf


def sample_exact(dist: OutputDistribution, seed, count: int) -> list[tuple[int, ...]]:
    """Draw configurations by inverse-CDF over canonical enumeration order.

    Deterministic per (seed, stream); empirical frequencies converge to the
    distribution.
    """
    order, cdf = _inverse_cdf_table(dist.probabilities)
    rng = as_seed(seed).generator()
    draws = rng.random(count)
    indices = np.minimum(np.searchsorted(cdf, draws, side="right"), len(order) - 1)
    return [order[i] for i in indices]


def sample_noisy(
    u,
    shape: ExperimentShape,
    noise: NoiseModel,
    seed,
    count: int,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> list[SampleRecord]:
    """Monte-Carlo trials of the noisy device.

    Each trial draws an input branch by its ensemble weight, then an
    outcome from that branch's exact output distribution (thinned by eta
    when lossy).  The fraction of all-ideal branches converges to p^n.
    """
    mat = np.asarray(u, dtype=complex)
    ensemble = input_ensemble(shape, noise, guard_limit)
    tables = []
    for branch in ensemble:
        probs = branch_output_distribution(mat, shape, branch, guard_limit)
        if noise.eta < 1.0:
            probs = apply_loss(
                OutputDistribution(shape.m, probs), noise.eta
            ).probabilities
        tables.append(_inverse_cdf_table(probs))
    ideal_flags = [branch.is_ideal(shape.n) for branch in ensemble]
    branch_cdf = np.cumsum([branch.weight for branch in ensemble])

    rng = as_seed(seed).generator()
    branch_draws = rng.random(count)
    outcome_draws = rng.random(count)
    branch_idx = np.minimum(
        np.searchsorted(branch_cdf, branch_draws, side="right"), len(ensemble) - 1
    )
    outcome_idx = np.empty(count, dtype=np.intp)
    for b in range(len(ensemble)):
        mask = branch_idx == b
        if not np.any(mask):
            continue
        _, cdf = tables[b]
        outcome_idx[mask] = np.minimum(
            np.searchsorted(cdf, outcome_draws[mask], side="right"), len(cdf) - 1
        )

    records = []
    for t in range(count):
        b = int(branch_idx[t])
        order, _ = tables[b]
        records.append(
            SampleRecord(t, order[int(outcome_idx[t])], ensemble[b], ideal_flags[b])
        )
    return records


def postselect(records: list[SampleRecord], n: int) -> tuple[list[SampleRecord], float]:
    """Keep records whose detected total equals n; report the success rate.

    Only the outcome total is consulted, never the branch label.
    """
    kept = [record for record in records if total_photons(record.outcome) == n]
    rate = len(kept) / len(records) if records else 0.0
    return kept, rate


def postselected_distribution(
    u,
    shape: ExperimentShape,
    noise: NoiseModel,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> tuple[OutputDistribution, float]:
    """Exact conditional distribution given n detected photons.

    The branch mixture (with loss applied) is restricted to outcomes of
    total n and renormalized; the retained mass is the post-selection
    success probability.  With two-photon errors present (p2 > 0) several
    branches contribute n-photon outcomes, so on generic unitaries this
    distribution differs from the ideal one.
    """
    mat = np.asarray(u, dtype=complex)
    total: dict[tuple[int, ...], float] = {}
    for branch in input_ensemble(shape, noise, guard_limit):
        probs = branch_output_distribution(mat, shape, branch, guard_limit)
        if noise.eta < 1.0:
            probs = apply_loss(
                OutputDistribution(shape.m, probs), noise.eta
            ).probabilities
        for key, value in probs.items():
            total[key] = total.get(key, 0.0) + branch.weight * value

    retained = {
        key: value for key, value in total.items() if total_photons(key) == shape.n
    }
    success = math.fsum(retained[key] for key in sorted(retained, reverse=True))
    if success <= 0.0:
        return OutputDistribution(shape.m, {}), 0.0
    conditioned = {key: value / success for key, value in retained.items()}
    dist = OutputDistribution(shape.m, conditioned)
    dist.validate()
    return dist, success
