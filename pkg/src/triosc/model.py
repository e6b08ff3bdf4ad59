"""System definition, mass rescaling and the coupling matrix.

The physical input is three unit-mass-normalizable oscillators

    H = sum_i [ p_i^2 / (2 m_i) + m_i w_i^2 x_i^2 / 2 ]
        + (d12 x1 x2 + d13 x1 x3 + d23 x2 x3) / 2

The canonical rescaling x_i = X_i / mu_i, p_i = mu_i P_i with
mu_i = sqrt(m_i / m) and m = (m1 m2 m3)^(1/3) turns this into a common-mass
form governed by a single symmetric 3x3 matrix of squared frequencies and
couplings J_ij = d_ij / (2 sqrt(m_i m_j)).  Everything downstream (normal
modes, spectra, entanglement) works on that matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "OscillatorSystem",
    "NormalizedSystem",
    "CouplingMatrix",
    "normalize",
    "coupling_matrix",
    "is_stable",
    "system_from_dict",
    "system_from_json",
    "system_to_dict",
]

# Relative eigenvalue floor below which the quadratic form is treated as
# not positive definite (exactly zero modes land here too).
STABILITY_CUTOFF = 1e-12


@dataclass(frozen=True)
class OscillatorSystem:
    """Three coupled oscillators in physical coordinates.

    Attributes:
        m1, m2, m3: oscillator masses, strictly positive.
        w1, w2, w3: bare angular frequencies, strictly positive.
        d12, d13, d23: bilinear coupling constants (any sign).
        hbar: value of the reduced Planck constant in the working units.
    """

    m1: float
    m2: float
    m3: float
    w1: float
    w2: float
    w3: float
    d12: float = 0.0
    d13: float = 0.0
    d23: float = 0.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        for name in ("m1", "m2", "m3", "w1", "w2", "w3", "d12", "d13", "d23", "hbar"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        for name in ("m1", "m2", "m3", "w1", "w2", "w3", "hbar"):
            value = getattr(self, name)
            if value <= 0.0:
                raise DomainError(f"{name} must be strictly positive, got {value!r}")

    @property
    def masses(self) -> tuple[float, float, float]:
        return (self.m1, self.m2, self.m3)

    @property
    def frequencies(self) -> tuple[float, float, float]:
        return (self.w1, self.w2, self.w3)

    @property
    def couplings(self) -> tuple[float, float, float]:
        return (self.d12, self.d13, self.d23)


@dataclass(frozen=True)
class NormalizedSystem:
    """Common-mass form of an :class:`OscillatorSystem`.

    Attributes:
        m: geometric mean mass (m1 m2 m3)^(1/3).
        mu1, mu2, mu3: scale factors sqrt(m_i / m); their product is 1.
        w1, w2, w3: bare frequencies, unchanged by the rescaling.
        j12, j13, j23: rescaled couplings d_ij / (2 sqrt(m_i m_j)).
        hbar: carried through from the input system.
    """

    m: float
    mu1: float
    mu2: float
    mu3: float
    w1: float
    w2: float
    w3: float
    j12: float
    j13: float
    j23: float
    hbar: float

    @property
    def mu(self) -> tuple[float, float, float]:
        return (self.mu1, self.mu2, self.mu3)


@dataclass(frozen=True)
class CouplingMatrix:
    """Symmetric matrix of squared frequencies and rescaled couplings.

    r[i][i] = w_i^2 and r[i][j] = j_ij for i != j.  Positive definiteness
    of this matrix is exactly the condition for a bound ground state.
    """

    r: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.r, dtype=float)
        if arr.shape != (3, 3):
            raise DomainError(f"coupling matrix must be 3x3, got shape {arr.shape}")
        if not np.allclose(arr, arr.T, rtol=0.0, atol=1e-12 * (1.0 + np.abs(arr).max())):
            raise DomainError("coupling matrix must be symmetric")
        # store a defensive copy, symmetrized so downstream code may rely on it
        object.__setattr__(self, "r", (arr + arr.T) / 2.0)

    def norm(self) -> float:
        """Frobenius norm, the scale used for relative tolerances."""
        return float(np.linalg.norm(self.r))


def normalize(sys: OscillatorSystem) -> NormalizedSystem:
    """Rescale to the common-mass form.

    Returns the geometric-mean mass, the per-oscillator scale factors and
    the rescaled couplings.  The transformation is canonical, so the
    Hamiltonian value at corresponding phase-space points is unchanged.
    """
    m = (sys.m1 * sys.m2 * sys.m3) ** (1.0 / 3.0)
    mu1 = math.sqrt(sys.m1 / m)
    mu2 = math.sqrt(sys.m2 / m)
    mu3 = math.sqrt(sys.m3 / m)
    return NormalizedSystem(
        m=m,
        mu1=mu1,
        mu2=mu2,
        mu3=mu3,
        w1=sys.w1,
        w2=sys.w2,
        w3=sys.w3,
        j12=sys.d12 / (2.0 * math.sqrt(sys.m1 * sys.m2)),
        j13=sys.d13 / (2.0 * math.sqrt(sys.m1 * sys.m3)),
        j23=sys.d23 / (2.0 * math.sqrt(sys.m2 * sys.m3)),
        hbar=sys.hbar,
    )


def coupling_matrix(ns: NormalizedSystem) -> CouplingMatrix:
    """Assemble the symmetric matrix the decoupling diagonalizes."""
    r = np.array(
        [
            [ns.w1 ** 2, ns.j12, ns.j13],
            [ns.j12, ns.w2 ** 2, ns.j23],
            [ns.j13, ns.j23, ns.w3 ** 2],
        ]
    )
    return CouplingMatrix(r=r)


def is_stable(cm: CouplingMatrix) -> bool:
    """True when every squared normal-mode frequency clears the cutoff.

    The threshold is relative: min eigenvalue > STABILITY_CUTOFF * ||R||_F.
    A matrix with an eigenvalue at exactly zero (free-particle direction)
    is reported unstable, as is one pushed slightly negative by coupling.
    """
    norm = cm.norm()
    if norm == 0.0:
        return False
    # plain symmetric eigensolve; the decoupling pipeline has its own
    # hand-rolled eigensolvers which are cross-checked against each other
    smallest = float(np.linalg.eigvalsh(cm.r)[0])
    return smallest > STABILITY_CUTOFF * norm


def system_from_dict(data: dict) -> OscillatorSystem:
    """Build an :class:`OscillatorSystem` from the canonical mapping form.

    Expected shape::

        {"masses": [m1, m2, m3],
         "frequencies": [w1, w2, w3],
         "couplings": {"d12": ..., "d13": ..., "d23": ...},
         "hbar": 1.0}

    "couplings" entries and "hbar" are optional and default to zero and one.
    Raises DomainError naming the field on any malformed entry.
    """
    if not isinstance(data, dict):
        raise DomainError(f"system description must be a mapping, got {type(data).__name__}")
    known = {"masses", "frequencies", "couplings", "hbar"}
    for key in data:
        if key not in known:
            raise DomainError(f"unknown system field {key!r}")
    masses = _triple(data, "masses")
    freqs = _triple(data, "frequencies")
    couplings = data.get("couplings", {})
    if not isinstance(couplings, dict):
        raise DomainError("couplings must be a mapping with keys d12, d13, d23")
    for key in couplings:
        if key not in ("d12", "d13", "d23"):
            raise DomainError(f"unknown coupling {key!r} (expected d12, d13, d23)")
    return OscillatorSystem(
        m1=masses[0],
        m2=masses[1],
        m3=masses[2],
        w1=freqs[0],
        w2=freqs[1],
        w3=freqs[2],
        d12=_number(couplings.get("d12", 0.0), "couplings.d12"),
        d13=_number(couplings.get("d13", 0.0), "couplings.d13"),
        d23=_number(couplings.get("d23", 0.0), "couplings.d23"),
        hbar=_number(data.get("hbar", 1.0), "hbar"),
    )


def system_from_json(text: str) -> OscillatorSystem:
    """Parse the canonical JSON input format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON input: {exc}") from exc
    return system_from_dict(data)


def system_to_dict(sys: OscillatorSystem) -> dict:
    """Inverse of :func:`system_from_dict`."""
    return {
        "masses": [sys.m1, sys.m2, sys.m3],
        "frequencies": [sys.w1, sys.w2, sys.w3],
        "couplings": {"d12": sys.d12, "d13": sys.d13, "d23": sys.d23},
        "hbar": sys.hbar,
    }


def _triple(data: dict, field: str) -> tuple[float, float, float]:
    try:
        raw = data[field]
    except KeyError:
        raise DomainError(f"missing required field {field!r}") from None
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise DomainError(f"{field} must be a list of three numbers")
    return tuple(_number(v, f"{field}[{i}]") for i, v in enumerate(raw))


def _number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"{field} must be a number, got {value!r}")
    return float(value)
