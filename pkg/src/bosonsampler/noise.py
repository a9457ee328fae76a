"""Independent per-mode input errors and their exact output distributions.

Each of the n input modes delivers the ideal single photon with probability
p, otherwise an error state.  Two concrete error channels are modeled:

* photon-number errors: the error state is vacuum with probability p0 or a
  two-photon state with probability p2 (p0 + p2 = 1), so the input is a
  classical mixture over 2^n or 3^n occupation branches;
* spectral mismatch: the error is a photon in a mode orthogonal to the
  common spectral mode.  Orthogonal photons do not interfere with anything
  and transit the interferometer classically, while detectors remain
  spectrally blind.

Loss/filtering is a separate per-photon survival probability eta applied to
output configurations by exact binomial thinning.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .distribution import OutputDistribution, output_distribution
from .fock import (
    DEFAULT_GUARD_LIMIT,
    ExperimentShape,
    GuardLimitError,
    enumerate_configurations,
    occupancy_factorial_product,
    total_photons,
)
from .permanent import build_scattering_submatrix, permanent_ryser

NUMBER_MODE = "number"
DISTINGUISHABILITY_MODE = "distinguishability"
CROSS_CHECK_TOL = 1e-10


@dataclass(frozen=True)
class NoiseModel:
    """Per-mode error parameters.

    p is the probability that an input mode delivers the ideal photon;
    (p0, p2) split the error branch between vacuum and double excitation
    in number mode; eta is the lumped per-photon survival probability of
    filtering plus detection.  ``p_per_mode`` optionally overrides p per
    input mode (the error channel may be distinct for each mode).
    """

    p: float = 1.0
    p0: float = 1.0
    p2: float = 0.0
    mode: str = NUMBER_MODE
    eta: float = 1.0
    p_per_mode: tuple[float, ...] | None = None

    def __post_init__(self):
        for name in ("p", "p0", "p2", "eta"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} outside [0, 1]")
        if abs(self.p0 + self.p2 - 1.0) > 1e-12:
            raise ValueError(f"p0 + p2 must be 1, got {self.p0 + self.p2}")
        if self.mode not in (NUMBER_MODE, DISTINGUISHABILITY_MODE):
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.p_per_mode is not None:
            object.__setattr__(self, "p_per_mode", tuple(self.p_per_mode))
            for value in self.p_per_mode:
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f"per-mode p={value} outside [0, 1]")

    def mode_p(self, i: int) -> float:
        if self.p_per_mode is None:
            return self.p
        if i >= len(self.p_per_mode):
            raise ValueError(
                f"p_per_mode has {len(self.p_per_mode)} entries, need mode {i}"
            )
        return self.p_per_mode[i]

    def to_json(self) -> dict:
        data = {
            "p": self.p,
            "p0": self.p0,
            "p2": self.p2,
            "mode": self.mode,
            "eta": self.eta,
        }
        if self.p_per_mode is not None:
            data["p_per_mode"] = list(self.p_per_mode)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "NoiseModel":
        p_per_mode = data.get("p_per_mode")
        return cls(
            p=float(data.get("p", 1.0)),
            p0=float(data.get("p0", 1.0)),
            p2=float(data.get("p2", 0.0)),
            mode=str(data.get("mode", NUMBER_MODE)),
            eta=float(data.get("eta", 1.0)),
            p_per_mode=tuple(float(x) for x in p_per_mode) if p_per_mode else None,
        )


@dataclass(frozen=True)
class InputBranch:
    """One classical branch of the mixed input state.

    ``distinguishable_photons`` labels photons living in orthogonal
    spectral modes as (input mode, photon index) pairs; it is empty in
    number mode.
    """

    occupation: tuple[int, ...]
    weight: float
    distinguishable_photons: tuple[tuple[int, int], ...] = field(default=())

    def is_ideal(self, n: int) -> bool:
        m = len(self.occupation)
        ideal = (1,) * n + (0,) * (m - n)
        return self.occupation == ideal and not self.distinguishable_photons


def ideal_component_probability(noise: NoiseModel, n: int) -> float:
    """Probability that all n input modes delivered the ideal photon, p^n.

    Computed as the same floating-point product of per-mode factors used
    for the all-ideal branch weight, so the two agree bit for bit.
    """
    return math.prod(noise.mode_p(i) for i in range(n))


def expand_input_ensemble(
    shape: ExperimentShape,
    noise: NoiseModel,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> list[InputBranch]:
    """Full classical expansion of the number-error input mixture.

    Each of the first n modes independently contributes 1 photon (weight
    p), 0 photons (weight (1-p)*p0) or 2 photons (weight (1-p)*p2);
    zero-weight options are dropped, so the ensemble has at most 3^n
    branches and the weights multiply per mode and sum to 1.
    """
    if noise.mode != NUMBER_MODE:
        raise ValueError("input ensemble expansion requires number-error mode")
    options: list[list[tuple[int, float]]] = []
    for i in range(shape.n):
        p = noise.mode_p(i)
        per_mode = [(1, p)]
        if (1.0 - p) * noise.p0 > 0.0:
            per_mode.append((0, (1.0 - p) * noise.p0))
        if (1.0 - p) * noise.p2 > 0.0:
            per_mode.append((2, (1.0 - p) * noise.p2))
        options.append(per_mode)

    size = math.prod(len(per_mode) for per_mode in options)
    if size > guard_limit:
        raise GuardLimitError(
            f"input ensemble of {size} branches exceeds guard limit {guard_limit}",
            count=size,
        )

    padding = (0,) * (shape.m - shape.n)
    branches = []
    for choice in itertools.product(*options):
        occupation = tuple(c for c, _ in choice) + padding
        weight = math.prod(w for _, w in choice)
        branches.append(InputBranch(occupation, weight))
    return branches


def expand_distinguishability_ensemble(
    shape: ExperimentShape,
    noise: NoiseModel,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> list[InputBranch]:
    """Classical expansion of the spectral-mismatch mixture.

    Every branch keeps all n photons; a subset of them sits in orthogonal
    spectral modes and is labeled as distinguishable.  Branch weight is
    the product of p (in the common mode) or 1-p (orthogonal) per photon.
    """
    if noise.mode != DISTINGUISHABILITY_MODE:
        raise ValueError("distinguishability expansion requires distinguishability mode")
    n = shape.n
    size = 1 << n
    if size > guard_limit:
        raise GuardLimitError(
            f"input ensemble of {size} branches exceeds guard limit {guard_limit}",
            count=size,
        )
    occupation = shape.input_occupation
    branches = []
    # Masks descend from all-ones so the all-ideal branch comes first.
    for mask in range(size - 1, -1, -1):
        weight = math.prod(
            noise.mode_p(i) if (mask >> i) & 1 else 1.0 - noise.mode_p(i)
            for i in range(n)
        )
        if weight == 0.0:
            continue
        labels = tuple((i, 0) for i in range(n) if not (mask >> i) & 1)
        branches.append(InputBranch(occupation, weight, labels))
    return branches


def input_ensemble(
    shape: ExperimentShape,
    noise: NoiseModel,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> list[InputBranch]:
    """Ensemble expansion dispatched on the noise mode."""
    if noise.mode == NUMBER_MODE:
        return expand_input_ensemble(shape, noise, guard_limit)
    return expand_distinguishability_ensemble(shape, noise, guard_limit)


# --- classical (distinguishable) transport ---------------------------------


def _single_transit(u: np.ndarray, source_mode: int) -> dict[tuple[int, ...], float]:
    m = u.shape[0]
    column = np.abs(u[:, source_mode]) ** 2
    dist = {}
    for i in range(m):
        key = tuple(1 if j == i else 0 for j in range(m))
        dist[key] = float(column[i])
    return dist


def convolve_occupations(
    a: dict[tuple[int, ...], float], b: dict[tuple[int, ...], float]
) -> dict[tuple[int, ...], float]:
    """Distribution of the mode-wise sum of two independent outcomes."""
    out: dict[tuple[int, ...], float] = {}
    for ka in sorted(a, reverse=True):
        pa = a[ka]
        for kb in sorted(b, reverse=True):
            key = tuple(x + y for x, y in zip(ka, kb))
            out[key] = out.get(key, 0.0) + pa * b[kb]
    return out


def _independent_transit_distribution(
    u: np.ndarray, input_occupation
) -> dict[tuple[int, ...], float]:
    """Each photon independently exits mode i with probability |u[i, j]|^2."""
    m = u.shape[0]
    dist = {(0,) * m: 1.0}
    for j, count in enumerate(input_occupation):
        for _ in range(count):
            dist = convolve_occupations(dist, _single_transit(u, j))
    return dist


def distinguishable_distribution(
    u, input_occupation, guard_limit: int = DEFAULT_GUARD_LIMIT
) -> OutputDistribution:
    """Exact output distribution of fully distinguishable photons.

    P(S) = Per(B[S, T]) / prod_i S_i! with B the elementwise |u|^2 matrix.
    An independent computation by convolving single-photon transits is run
    as an internal cross-check; disagreement signals a bug.
    """
    mat = np.asarray(u, dtype=complex)
    occ = tuple(input_occupation)
    m = len(occ)
    n = total_photons(occ)
    b = np.abs(mat) ** 2
    probabilities = {}
    for out in enumerate_configurations(n, m, guard_limit=guard_limit):
        per = permanent_ryser(build_scattering_submatrix(b, occ, out)).real
        probabilities[out] = per / occupancy_factorial_product(out)

    cross = _independent_transit_distribution(mat, occ)
    worst = max(
        abs(probabilities.get(key, 0.0) - cross.get(key, 0.0))
        for key in set(probabilities) | set(cross)
    )
    if worst > CROSS_CHECK_TOL:
        raise ArithmeticError(
            f"distinguishable transport cross-check failed: paths differ by {worst}"
        )
    dist = OutputDistribution(m, probabilities)
    dist.validate()
    return dist


# --- partial distinguishability ---------------------------------------------


def _distinguishability_branch_distribution(
    u: np.ndarray,
    shape: ExperimentShape,
    branch: InputBranch,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> dict[tuple[int, ...], float]:
    labeled = {mode for mode, _ in branch.distinguishable_photons}
    coherent_occ = tuple(
        c if i not in labeled else 0 for i, c in enumerate(branch.occupation)
    )
    quantum = output_distribution(u, coherent_occ, guard_limit=guard_limit)
    dist = dict(quantum.probabilities)
    for mode in sorted(labeled):
        dist = convolve_occupations(dist, _single_transit(u, mode))
    return dist


def branch_output_distribution(
    u,
    shape: ExperimentShape,
    branch: InputBranch,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> dict[tuple[int, ...], float]:
    """Lossless output distribution of a single input branch."""
    mat = np.asarray(u, dtype=complex)
    if branch.distinguishable_photons:
        return _distinguishability_branch_distribution(mat, shape, branch, guard_limit)
    return dict(output_distribution(mat, branch.occupation, guard_limit).probabilities)


def partial_distinguishability_distribution(
    u,
    shape: ExperimentShape,
    p: float,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> OutputDistribution:
    """Interpolation between quantum (p=1) and classical (p=0) transport.

    Mixture over all 2^n subsets of photons sharing the common spectral
    mode, weighted p^|G| * (1-p)^(n-|G|); each branch convolves the exact
    quantum distribution of the common-mode photons with independent
    classical transits of the orthogonal ones.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    noise = NoiseModel(p=p, mode=DISTINGUISHABILITY_MODE)
    mat = np.asarray(u, dtype=complex)
    total: dict[tuple[int, ...], float] = {}
    for branch in expand_distinguishability_ensemble(shape, noise, guard_limit):
        dist = _distinguishability_branch_distribution(mat, shape, branch, guard_limit)
        for key, value in dist.items():
            total[key] = total.get(key, 0.0) + branch.weight * value
    dist = OutputDistribution(shape.m, total)
    dist.validate()
    return dist


# --- loss / filtering --------------------------------------------------------


def _thinning_options(count: int, eta: float) -> list[tuple[int, float]]:
    return [
        (k, math.comb(count, k) * eta**k * (1.0 - eta) ** (count - k))
        for k in range(count + 1)
    ]


def apply_loss(dist: OutputDistribution, eta: float) -> OutputDistribution:
    """Binomial thinning: each photon survives independently with probability eta.

    Output configurations range over all photon totals up to the input's;
    total probability is preserved.  Amplitudes are dropped (thinning
    produces a mixture).
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta={eta} outside [0, 1]")
    out: dict[tuple[int, ...], float] = {}
    for key in dist.configurations():
        weight = dist.probabilities[key]
        partial: list[tuple[tuple[int, ...], float]] = [((), 1.0)]
        for count in key:
            options = _thinning_options(count, eta)
            partial = [
                (prefix + (k,), q * w) for prefix, q in partial for k, w in options
            ]
        for thinned, q in partial:
            out[thinned] = out.get(thinned, 0.0) + weight * q
    thinned_dist = OutputDistribution(dist.modes, out)
    thinned_dist.validate()
    return thinned_dist


def noisy_output_distribution(
    u,
    shape: ExperimentShape,
    noise: NoiseModel,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
) -> OutputDistribution:
    """Exact full (unconditioned) output distribution under the noise model.

    Weighted mixture of every branch's distribution, with loss applied,
    combined in ensemble enumeration order.
    """
    mat = np.asarray(u, dtype=complex)
    total: dict[tuple[int, ...], float] = {}
    for branch in input_ensemble(shape, noise, guard_limit):
        dist = branch_output_distribution(mat, shape, branch, guard_limit)
        for key, value in dist.items():
            total[key] = total.get(key, 0.0) + branch.weight * value
    mixed = OutputDistribution(shape.m, total)
    if noise.eta < 1.0:
        mixed = apply_loss(mixed, noise.eta)
    mixed.validate()
    return mixed
