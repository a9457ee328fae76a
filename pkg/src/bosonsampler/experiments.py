"""Experiment drivers reproducing the error-scaling laws as tables.

The headline quantities: the all-ideal input component has probability
p^n, so it decays inverse-exponentially in the photon number, and
post-selecting on n detected photons after per-photon filtering with
survival eta succeeds with probability eta^n.  Each driver emits one row
per photon count with both the analytic value and its Monte-Carlo or
exact counterpart.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable

from .distribution import output_distribution
from .fock import DEFAULT_GUARD_LIMIT, ExperimentShape, GuardLimitError
from .interferometer import haar_random
from .metrics import total_variation_distance
from .noise import NoiseModel, ideal_component_probability, noisy_output_distribution
from .rng import RandomSeed
from .sampling import postselect, postselected_distribution, sample_noisy

DEFAULT_TRIALS = 100_000


def default_mode_rule(n: int) -> int:
    """Dilute-regime default: m = n^2 modes."""
    return n * n


@dataclass
class ScalingRow:
    """One photon count's worth of error-scaling results.

    ``exact`` is False when the configuration space exceeded the guard
    limit; then only the analytic column is populated.
    """

    n: int
    m: int
    p: float
    analytic_ideal_probability: float
    empirical_ideal_fraction: float | None
    tvd_ideal_noisy: float | None
    tvd_ideal_postselected: float | None
    postselect_success: float | None
    exact: bool = True


@dataclass
class FilterRow:
    """Post-selection success of the pure-loss (filtering) model."""

    n: int
    analytic_success: float
    empirical_success: float


def run_scaling_experiment(
    p: float,
    photon_counts: list[int],
    mode_rule: Callable[[int], int] = default_mode_rule,
    noise: NoiseModel | None = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> list[ScalingRow]:
    """Exact and Monte-Carlo error scaling across photon counts.

    Per n, one Haar unitary is drawn on m = mode_rule(n) modes (stream
    2*row for the unitary, 2*row+1 for sampling, both under ``seed``) and
    the ideal, noisy and post-selected distributions are computed exactly.
    The analytic column is exactly p^n.  Rows whose configuration space
    exceeds the guard keep only the analytic column and are marked.
    """
    if noise is None:
        noise = NoiseModel(p=p)
    rows = []
    for index, n in enumerate(photon_counts):
        m = mode_rule(n)
        row_noise = dataclasses.replace(noise, p=p)
        analytic = ideal_component_probability(row_noise, n)
        row = ScalingRow(
            n=n,
            m=m,
            p=p,
            analytic_ideal_probability=analytic,
            empirical_ideal_fraction=None,
            tvd_ideal_noisy=None,
            tvd_ideal_postselected=None,
            postselect_success=None,
            exact=False,
        )
        try:
            shape = ExperimentShape(n, m)
            shape.check_guard(guard_limit)
            u = haar_random(m, seed, stream=2 * index)
            ideal = output_distribution(u, shape.input_occupation, guard_limit)
            noisy = noisy_output_distribution(u, shape, row_noise, guard_limit)
            postselected, success = postselected_distribution(
                u, shape, row_noise, guard_limit
            )
            records = sample_noisy(
                u, shape, row_noise, RandomSeed(seed, 2 * index + 1), trials, guard_limit
            )
            row.tvd_ideal_noisy = total_variation_distance(ideal, noisy)
            row.tvd_ideal_postselected = total_variation_distance(ideal, postselected)
            row.postselect_success = success
            row.empirical_ideal_fraction = (
                sum(r.branch_ideal for r in records) / trials if trials else None
            )
            row.exact = True
        except GuardLimitError:
            pass
        rows.append(row)
    return rows


def run_filter_experiment(
    eta: float,
    photon_counts: list[int],
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> list[FilterRow]:
    """Pure-loss post-selection success against the analytic eta^n.

    Sources are ideal (p = 1); each photon survives filtering with
    probability eta.  The unitary is irrelevant to the detected total, so
    the smallest legal interferometer (m = n) is used per row.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta={eta} outside [0, 1]")
    rows = []
    for index, n in enumerate(photon_counts):
        shape = ExperimentShape(n, n)
        noise = NoiseModel(p=1.0, eta=eta)
        u = haar_random(n, seed, stream=2 * index)
        records = sample_noisy(u, shape, noise, RandomSeed(seed, 2 * index + 1), trials)
        _, rate = postselect(records, n)
        rows.append(FilterRow(n=n, analytic_success=eta**n, empirical_success=rate))
    return rows
