"""Exact matrix permanents and the scattering submatrix construction.

Two independent evaluation routes are provided on purpose: the brute-force
permutation sum (`permanent_naive`, the validation oracle) and Ryser's
inclusion-exclusion formula with Gray-code subset iteration
(`permanent_ryser`, the workhorse).  Every transition amplitude in the
simulator reduces to one of these calls.
"""

from __future__ import annotations

import itertools
from functools import cache

import numpy as np

from .fock import GuardLimitError, occupation_to_modes, total_photons

NAIVE_DIMENSION_LIMIT = 9
RYSER_DIMENSION_LIMIT = 30

# Partition count used by permanent_ryser when none is passed.  Fixed by
# configuration (set_default_partitions), never by detected hardware, so
# results are reproducible across machines.
_default_partitions = 1


def set_default_partitions(partitions: int) -> None:
    """Fix the default subset-range partition count for Ryser evaluation."""
    global _default_partitions
    if partitions < 1:
        raise ValueError(f"partition count must be >= 1, got {partitions}")
    _default_partitions = partitions


def get_default_partitions() -> int:
    return _default_partitions


def _as_square_complex(a) -> np.ndarray:
    mat = np.asarray(a, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"matrix must be square, got shape {mat.shape}")
    if mat.size and not np.all(np.isfinite(mat)):
        raise ValueError("matrix entries must be finite")
    return mat


@cache
def _permutation_indices(k: int) -> np.ndarray:
    # Cached only for k <= 8; the k=8 table is ~2.5 MB.
    return np.array(list(itertools.permutations(range(k))), dtype=np.intp)


def permanent_naive(a) -> complex:
    """Permanent by direct summation over all k! permutations.

    Parameters
    ----------
    a : square array_like of complex, dimension k <= 9

    Returns
    -------
    complex
        sum over permutations sigma of prod_i a[i, sigma(i)].
        The permanent of the 0x0 matrix is 1.
    """
    mat = _as_square_complex(a)
    k = mat.shape[0]
    if k > NAIVE_DIMENSION_LIMIT:
        raise GuardLimitError(
            f"naive permanent limited to k <= {NAIVE_DIMENSION_LIMIT}, got k={k}",
            count=k,
        )
    if k == 0:
        return complex(1)
    rows = np.arange(k)
    if k <= 8:
        idx = _permutation_indices(k)
        return complex(np.sum(np.prod(mat[rows, idx], axis=1)))
    # k == 9: chunk the permutation stream to bound memory.
    total = complex(0)
    perms = itertools.permutations(range(k))
    while True:
        chunk = list(itertools.islice(perms, 65536))
        if not chunk:
            break
        idx = np.array(chunk, dtype=np.intp)
        total += complex(np.sum(np.prod(mat[rows, idx], axis=1)))
    return total


def _partition_bounds(total_subsets: int, partitions: int) -> list[tuple[int, int]]:
    # Contiguous split of subset indices [1, total_subsets); depends only
    # on (k, partitions) so results are bit-for-bit reproducible.
    span = total_subsets - 1
    partitions = min(partitions, span)
    bounds = []
    for i in range(partitions):
        lo = 1 + (span * i) // partitions
        hi = 1 + (span * (i + 1)) // partitions
        if lo < hi:
            bounds.append((lo, hi))
    return bounds


def _ryser_range(columns: list[list[complex]], k: int, start: int, stop: int) -> complex:
    """Partial Ryser sum over subset indices [start, stop).

    Subset index t encodes the column subset gray(t) = t ^ (t >> 1); the
    k running row-sums are updated incrementally with the single column
    that changes between consecutive Gray codes.
    """
    gray = start ^ (start >> 1)
    row_sums = [complex(0)] * k
    for j in range(k):
        if (gray >> j) & 1:
            col = columns[j]
            for i in range(k):
                row_sums[i] += col[i]
    sign = -1.0 if bin(gray).count("1") & 1 else 1.0

    # Kahan-compensated accumulation: the alternating terms cancel heavily
    # for k near the guard.
    acc = complex(0)
    comp = complex(0)

    prod = complex(1)
    for v in row_sums:
        prod *= v
    term = sign * prod
    y = term - comp
    t = acc + y
    comp = (t - acc) - y
    acc = t

    for idx in range(start + 1, stop):
        j = (idx & -idx).bit_length() - 1
        gray ^= 1 << j
        col = columns[j]
        if (gray >> j) & 1:
            for i in range(k):
                row_sums[i] += col[i]
        else:
            for i in range(k):
                row_sums[i] -= col[i]
        sign = -sign
        prod = complex(1)
        for v in row_sums:
            prod *= v
        term = sign * prod
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


def permanent_ryser(a, partitions: int | None = None) -> complex:
    """Permanent via Ryser's formula, O(2^k * k) with Gray-code updates.

    Per(A) = (-1)^k * sum over nonempty column subsets S of
    (-1)^{|S|} * prod_i sum_{j in S} a[i, j].

    Parameters
    ----------
    a : square array_like of complex, dimension k <= 30
    partitions : number of contiguous subset ranges to evaluate and then
        combine in fixed order.  Results are deterministic for a fixed
        partition count; defaults to the configured module-wide count.

    Returns
    -------
    complex
    """
    mat = _as_square_complex(a)
    k = mat.shape[0]
    if k > RYSER_DIMENSION_LIMIT:
        raise GuardLimitError(
            f"Ryser permanent limited to k <= {RYSER_DIMENSION_LIMIT}, got k={k}",
            count=k,
        )
    if k == 0:
        return complex(1)
    if partitions is None:
        partitions = _default_partitions
    if partitions < 1:
        raise ValueError(f"partition count must be >= 1, got {partitions}")

    columns = [[complex(mat[i, j]) for i in range(k)] for j in range(k)]
    total = complex(0)
    for lo, hi in _partition_bounds(1 << k, partitions):
        total += _ryser_range(columns, k, lo, hi)
    if k & 1:
        total = -total
    return total


def build_scattering_submatrix(u, input_occupation, output_occupation) -> np.ndarray:
    """Photon-routing submatrix of an interferometer unitary.

    Column j of ``u`` is repeated ``input_occupation[j]`` times and row i
    is repeated ``output_occupation[i]`` times, giving the k x k matrix
    whose permanent carries the transition amplitude.  For collision-free
    input and output this is a plain row/column selection.
    """
    mat = np.asarray(u)
    rows = occupation_to_modes(output_occupation)
    cols = occupation_to_modes(input_occupation)
    if len(rows) != len(cols):
        raise ValueError(
            f"photon number mismatch: input has {len(cols)} photons, "
            f"output has {len(rows)}"
        )
    if len(input_occupation) != mat.shape[1] or len(output_occupation) != mat.shape[0]:
        raise ValueError(
            f"occupation length must match matrix dimension {mat.shape}"
        )
    if total_photons(input_occupation) == 0:
        return np.zeros((0, 0), dtype=complex)
    return mat[np.ix_(rows, cols)].astype(complex)
