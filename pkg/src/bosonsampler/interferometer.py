"""Linear-optical circuits: beamsplitters, phase-shifters, Haar-random unitaries.

Beamsplitter convention (fixed so tests are bit-reproducible): the 2x2
block acting on modes (i, j) is

    [[cos(theta),              -exp(+i*phi) * sin(theta)],
     [exp(-i*phi) * sin(theta), cos(theta)             ]]

and a phase-shifter multiplies mode i by exp(i*phi).  theta = pi/4 gives
the balanced 50:50 splitter.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .rng import RandomSeed

UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class BeamSplitter:
    i: int
    j: int
    theta: float
    phi: float = 0.0


@dataclass(frozen=True)
class PhaseShifter:
    i: int
    phi: float


OpticalElement = Union[BeamSplitter, PhaseShifter]


class UnitarityReport(NamedTuple):
    ok: bool
    max_deviation: float


def _check_mode(index: int, m: int) -> None:
    if not 0 <= index < m:
        raise ValueError(f"mode index {index} out of range for m={m}")


def element_unitary(element: OpticalElement, m: int) -> np.ndarray:
    """m x m unitary of a single optical element (identity elsewhere)."""
    u = np.eye(m, dtype=complex)
    if isinstance(element, BeamSplitter):
        _check_mode(element.i, m)
        _check_mode(element.j, m)
        if element.i == element.j:
            raise ValueError("beamsplitter requires two distinct modes")
        c = np.cos(element.theta)
        s = np.sin(element.theta)
        phase = cmath.exp(1j * element.phi)
        u[element.i, element.i] = c
        u[element.i, element.j] = -phase * s
        u[element.j, element.i] = s / phase
        u[element.j, element.j] = c
    elif isinstance(element, PhaseShifter):
        _check_mode(element.i, m)
        u[element.i, element.i] = cmath.exp(1j * element.phi)
    else:
        raise TypeError(f"unknown optical element {element!r}")
    return u


def compose(elements, m: int) -> np.ndarray:
    """Total unitary of an element list; the first element acts first."""
    u = np.eye(m, dtype=complex)
    for element in elements:
        u = element_unitary(element, m) @ u
    return u


def inverse_elements(elements) -> list[OpticalElement]:
    """Element list realizing the inverse circuit (reversed, angles negated)."""
    out: list[OpticalElement] = []
    for element in reversed(list(elements)):
        if isinstance(element, BeamSplitter):
            out.append(BeamSplitter(element.i, element.j, -element.theta, element.phi))
        else:
            out.append(PhaseShifter(element.i, -element.phi))
    return out


def haar_random(m: int, seed: int, stream: int = 0) -> np.ndarray:
    """Haar-distributed m x m unitary, deterministic per (seed, stream).

    A Ginibre matrix of independent standard complex normals is QR
    orthonormalized, then each column is rescaled by the unit phase of the
    corresponding diagonal entry of R.  Without the phase correction the
    QR output is not Haar.
    """
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    rng = RandomSeed(seed, stream).generator()
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return q


def validate_unitarity(u, tol: float = UNITARITY_TOL) -> UnitarityReport:
    """Max elementwise deviation of U†U from the identity."""
    mat = np.asarray(u, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"matrix must be square, got shape {mat.shape}")
    gram = mat.conj().T @ mat
    deviation = float(np.max(np.abs(gram - np.eye(mat.shape[0]))))
    return UnitarityReport(deviation <= tol, deviation)


# --- JSON wire formats -----------------------------------------------------
#
# Circuits: [{"kind": "bs", "i": 0, "j": 1, "theta": 0.7854, "phi": 0.0},
#            {"kind": "ps", "i": 2, "phi": 1.571}]
# Matrices: arrays of arrays of [re, im] pairs.


def elements_from_json(data) -> list[OpticalElement]:
    elements: list[OpticalElement] = []
    for entry in data:
        kind = entry.get("kind")
        if kind == "bs":
            elements.append(
                BeamSplitter(
                    int(entry["i"]),
                    int(entry["j"]),
                    float(entry["theta"]),
                    float(entry.get("phi", 0.0)),
                )
            )
        elif kind == "ps":
            elements.append(PhaseShifter(int(entry["i"]), float(entry["phi"])))
        else:
            raise ValueError(f"unknown element kind {kind!r}")
    return elements


def elements_to_json(elements) -> list[dict]:
    out = []
    for element in elements:
        if isinstance(element, BeamSplitter):
            out.append(
                {
                    "kind": "bs",
                    "i": element.i,
                    "j": element.j,
                    "theta": element.theta,
                    "phi": element.phi,
                }
            )
        elif isinstance(element, PhaseShifter):
            out.append({"kind": "ps", "i": element.i, "phi": element.phi})
        else:
            raise TypeError(f"unknown optical element {element!r}")
    return out


def matrix_to_json(u) -> list[list[list[float]]]:
    mat = np.asarray(u, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in mat]


def matrix_from_json(data) -> np.ndarray:
    rows = []
    for row in data:
        rows.append([complex(float(re), float(im)) for re, im in row])
    mat = np.array(rows, dtype=complex) if rows else np.zeros((0, 0), dtype=complex)
    if mat.ndim != 2:
        raise ValueError("matrix JSON must be an array of arrays of [re, im] pairs")
    return mat
