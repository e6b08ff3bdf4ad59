"""Gell-Mann generators and the three-angle rotation built from them.

The decoupling rotation is the product of three one-parameter subgroups,

    M(theta, phi, varphi) = exp(i varphi L7) exp(i phi L2) exp(i theta L5)

which is real orthogonal with det +1 and covers all of SO(3) (Tait-Bryan
angles about the x-z-y axes, in that conjugation order).  This module keeps
two independent routes to M: the closed-form entries and the literal
product of matrix exponentials, so each can check the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OracleAccuracyError

__all__ = [
    "GELL_MANN",
    "gell_mann",
    "structure_constant",
    "commutator_residual",
    "EulerAngles",
    "RotationMatrix",
    "rotation",
    "matrix_exponential",
    "rotation_via_exponentials",
    "conjugation_residuals",
]


def _build_gell_mann() -> tuple[np.ndarray, ...]:
    l1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
    l2 = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex)
    l3 = np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=complex)
    l4 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex)
    l5 = np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=complex)
    l6 = np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
    l7 = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex)
    l8 = np.array([[1, 0, 0], [0, 1, 0], [0, 0, -2]], dtype=complex) / math.sqrt(3.0)
    return (l1, l2, l3, l4, l5, l6, l7, l8)


GELL_MANN: tuple[np.ndarray, ...] = _build_gell_mann()

# nonzero f_jkl on ascending index triples; all others follow by total
# antisymmetry or vanish
_F_TABLE: dict[tuple[int, int, int], float] = {
    (1, 2, 3): 1.0,
    (1, 4, 7): 0.5,
    (1, 5, 6): -0.5,
    (2, 4, 6): 0.5,
    (2, 5, 7): 0.5,
    (3, 4, 5): 0.5,
    (3, 6, 7): -0.5,
    (4, 5, 8): math.sqrt(3.0) / 2.0,
    (6, 7, 8): math.sqrt(3.0) / 2.0,
}


def gell_mann(j: int) -> np.ndarray:
    """Generator lambda_j for j in 1..8 (a copy, safe to mutate)."""
    if not isinstance(j, int) or isinstance(j, bool) or not 1 <= j <= 8:
        raise DomainError(f"generator index must be an integer in 1..8, got {j!r}")
    return GELL_MANN[j - 1].copy()


def structure_constant(j: int, k: int, l: int) -> float:
    """Totally antisymmetric f_jkl defined by [L_j, L_k] = 2i f_jkl L_l."""
    for idx in (j, k, l):
        if not isinstance(idx, int) or isinstance(idx, bool) or not 1 <= idx <= 8:
            raise DomainError(f"structure constant index must be in 1..8, got {idx!r}")
    if j == k or k == l or j == l:
        return 0.0
    triple = (j, k, l)
    key = tuple(sorted(triple))
    value = _F_TABLE.get(key, 0.0)
    if value == 0.0:
        return 0.0
    # parity of the permutation taking sorted order to the given order
    perm = [key.index(i) for i in triple]
    inversions = sum(
        1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b]
    )
    return value if inversions % 2 == 0 else -value


def commutator_residual(j: int, k: int) -> float:
    """Max-abs deviation of [L_j, L_k] from 2i sum_l f_jkl L_l."""
    a, b = GELL_MANN[j - 1], GELL_MANN[k - 1]
    lhs = a @ b - b @ a
    rhs = np.zeros((3, 3), dtype=complex)
    for l in range(1, 9):
        f = structure_constant(j, k, l)
        if f != 0.0:
            rhs = rhs + 2j * f * GELL_MANN[l - 1]
    return float(np.abs(lhs - rhs).max())


@dataclass(frozen=True)
class EulerAngles:
    """Angles (theta, phi, varphi) of the three-exponential factorization."""

    theta: float
    phi: float
    varphi: float


@dataclass(frozen=True)
class RotationMatrix:
    """Real orthogonal matrix with det +1."""

    m: np.ndarray

    def orthogonality_residual(self) -> float:
        return float(np.abs(self.m @ self.m.T - np.eye(3)).max())

    def det(self) -> float:
        return float(np.linalg.det(self.m))


def _rotation_entries(theta, phi, varphi):
    """The nine closed-form entries; works elementwise on arrays."""
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    cv, sv = np.cos(varphi), np.sin(varphi)
    m11 = ct * cp
    m12 = sp
    m13 = cp * st
    m21 = -st * sv - ct * cv * sp
    m22 = cp * cv
    m23 = ct * sv - st * cv * sp
    m31 = -st * cv + ct * sp * sv
    m32 = -cp * sv
    m33 = ct * cv + st * sp * sv
    return m11, m12, m13, m21, m22, m23, m31, m32, m33


def rotation(angles: EulerAngles) -> RotationMatrix:
    """Closed-form M(theta, phi, varphi)."""
    e = _rotation_entries(angles.theta, angles.phi, angles.varphi)
    return RotationMatrix(m=np.array(e, dtype=float).reshape(3, 3))


def matrix_exponential(a: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """exp(a) by scaled Taylor series with repeated squaring.

    The argument is scaled by 2^-s until its max-abs entry is below 1/2,
    the series is summed until the term norm falls below tol relative to
    the partial sum, then the result is squared s times.
    """
    a = np.asarray(a)
    scale = float(np.abs(a).max())
    s = 0
    if scale > 0.5:
        s = max(0, int(math.ceil(math.log2(scale / 0.5))))
    b = a / (2 ** s)
    result = np.eye(a.shape[0], dtype=b.dtype)
    term = np.eye(a.shape[0], dtype=b.dtype)
    for k in range(1, 60):
        term = term @ b / k
        result = result + term
        if np.abs(term).max() <= tol * max(1.0, float(np.abs(result).max())):
            break
    for _ in range(s):
        result = result @ result
    return result


def rotation_via_exponentials(angles: EulerAngles) -> RotationMatrix:
    """M as the literal product exp(i varphi L7) exp(i phi L2) exp(i theta L5).

    Serves as the independent construction the closed form is checked
    against.  The product is real up to roundoff; residual imaginary parts
    above 1e-12 abort rather than being silently discarded.
    """
    e7 = matrix_exponential(1j * angles.varphi * GELL_MANN[6])
    e2 = matrix_exponential(1j * angles.phi * GELL_MANN[1])
    e5 = matrix_exponential(1j * angles.theta * GELL_MANN[4])
    product = e7 @ e2 @ e5
    imag = float(np.abs(product.imag).max())
    if imag > 1e-12:
        raise OracleAccuracyError(
            f"rotation exponential product has imaginary residue {imag:.3e} > 1e-12"
        )
    return RotationMatrix(m=np.ascontiguousarray(product.real))


def conjugation_residuals(
    theta: float, phi: float, varphi: float, diag: tuple[float, float, float]
) -> dict[str, float]:
    """Residuals of the twelve exponential-conjugation identities.

    For each subgroup angle xi in {phi (L2), theta (L5), varphi (L7)} the
    map X -> exp(-i xi L) X exp(+i xi L) is evaluated on the two off-axis
    symmetric generators, the in-plane generator, and an arbitrary diagonal
    matrix, and compared with its closed trigonometric form.  Keys name the
    conjugating angle and the conjugated object; values are max-abs errors.
    """
    a, b, c = diag
    d = np.diag([a, b, c]).astype(complex)
    l1, l4, l6 = GELL_MANN[0], GELL_MANN[3], GELL_MANN[5]

    def conj(angle: float, gen: np.ndarray, x: np.ndarray) -> np.ndarray:
        u = matrix_exponential(1j * angle * gen)
        uinv = matrix_exponential(-1j * angle * gen)
        return uinv @ x @ u

    out: dict[str, float] = {}

    def put(key: str, lhs: np.ndarray, rhs: np.ndarray) -> None:
        out[key] = float(np.abs(lhs - rhs).max())

    # conjugation by exp(i phi L2): rotation in the 1-2 plane
    g = GELL_MANN[1]
    cp, sp = math.cos(phi), math.sin(phi)
    c2p, s2p = math.cos(2 * phi), math.sin(2 * phi)
    put("phi:l6", conj(phi, g, l6), cp * l6 - sp * l4)
    put("phi:l4", conj(phi, g, l4), cp * l4 + sp * l6)
    put("phi:l1", conj(phi, g, l1), c2p * l1 + np.diag([-s2p, s2p, 0.0]))
    put(
        "phi:diag",
        conj(phi, g, d),
        np.diag([a * cp**2 + b * sp**2, b * cp**2 + a * sp**2, c])
        + 0.5 * (a - b) * s2p * l1,
    )

    # conjugation by exp(i theta L5): rotation in the 1-3 plane
    g = GELL_MANN[4]
    ct, st = math.cos(theta), math.sin(theta)
    c2t, s2t = math.cos(2 * theta), math.sin(2 * theta)
    put("theta:l6", conj(theta, g, l6), ct * l6 - st * l1)
    put("theta:l1", conj(theta, g, l1), ct * l1 + st * l6)
    put("theta:l4", conj(theta, g, l4), c2t * l4 + np.diag([-s2t, 0.0, s2t]))
    put(
        "theta:diag",
        conj(theta, g, d),
        np.diag([a * ct**2 + c * st**2, b, c * ct**2 + a * st**2])
        + 0.5 * (a - c) * s2t * l4,
    )

    # conjugation by exp(i varphi L7): rotation in the 2-3 plane
    g = GELL_MANN[6]
    cv, sv = math.cos(varphi), math.sin(varphi)
    c2v, s2v = math.cos(2 * varphi), math.sin(2 * varphi)
    put("varphi:l1", conj(varphi, g, l1), cv * l1 + sv * l4)
    put("varphi:l4", conj(varphi, g, l4), cv * l4 - sv * l1)
    put("varphi:l6", conj(varphi, g, l6), c2v * l6 + np.diag([0.0, -s2v, s2v]))
    put(
        "varphi:diag",
        conj(varphi, g, d),
        np.diag([a, b * cv**2 + c * sv**2, c * cv**2 + b * sv**2])
        + 0.5 * (b - c) * s2v * l6,
    )

    return out
