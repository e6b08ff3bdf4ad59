"""Energies, stationary wavefunctions and the ground-state Gaussian.

In the rotated coordinates q = M^T (mu . x) the system is three uncoupled
oscillators of common mass m and frequencies sigma_i, so the spectrum and
eigenfunctions are products of standard one-dimensional solutions.  All
formulas below are expressed directly in the original coordinates through
the closed-form rotation entries; the combined rescale-rotate change of
variables has unit Jacobian, so normalization carries over unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decouple import NormalModes
from .errors import DomainError
from .model import NormalizedSystem
from .su3 import EulerAngles

__all__ = [
    "MAX_QUANTUM_NUMBER",
    "QuantumNumbers",
    "energy",
    "NormalCoordinates",
    "to_normal_coords",
    "hermite_values",
    "wavefunction",
    "GaussianGroundState",
    "ground_gaussian",
]

# recurrence cap; beyond this the unscaled Hermite values overflow the
# dynamic range long before the physics gets interesting
MAX_QUANTUM_NUMBER = 30


@dataclass(frozen=True)
class QuantumNumbers:
    """Excitation numbers (n1, n2, n3) of the three normal modes.

    Each must lie in 0..30 inclusive.
    """

    n1: int
    n2: int
    n3: int

    def __post_init__(self) -> None:
        for name in ("n1", "n2", "n3"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise DomainError(f"{name} must be an integer, got {value!r}")
            if not 0 <= value <= MAX_QUANTUM_NUMBER:
                raise DomainError(
                    f"{name} must be in 0..{MAX_QUANTUM_NUMBER}, got {value}"
                )

    @property
    def total(self) -> int:
        return self.n1 + self.n2 + self.n3

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n1, self.n2, self.n3)


def energy(modes: NormalModes, n: QuantumNumbers, hbar: float = 1.0) -> float:
    """E = hbar * sum_i sigma_i (n_i + 1/2)."""
    return hbar * (
        modes.sigma1 * (n.n1 + 0.5)
        + modes.sigma2 * (n.n2 + 0.5)
        + modes.sigma3 * (n.n3 + 0.5)
    )


@dataclass(frozen=True)
class NormalCoordinates:
    """Values of the decoupled coordinates; fields may be arrays."""

    q1: np.ndarray | float
    q2: np.ndarray | float
    q3: np.ndarray | float


def to_normal_coords(
    x1, x2, x3, ns: NormalizedSystem, angles: EulerAngles
) -> NormalCoordinates:
    """Map original coordinates to the decoupled ones, q = M^T (mu . x).

    Accepts scalars or broadcastable arrays.  Written out entry by entry in
    the closed trigonometric form of the rotation.
    """
    ct, st = math.cos(angles.theta), math.sin(angles.theta)
    cp, sp = math.cos(angles.phi), math.sin(angles.phi)
    cv, sv = math.cos(angles.varphi), math.sin(angles.varphi)
    u1, u2, u3 = ns.mu1 * np.asarray(x1), ns.mu2 * np.asarray(x2), ns.mu3 * np.asarray(x3)
    q1 = ct * cp * u1 - (st * sv + ct * cv * sp) * u2 - (st * cv - ct * sp * sv) * u3
    q2 = sp * u1 + cp * cv * u2 - cp * sv * u3
    q3 = cp * st * u1 + (ct * sv - st * cv * sp) * u2 + (ct * cv + st * sp * sv) * u3
    return NormalCoordinates(q1=q1, q2=q2, q3=q3)


def hermite_values(n: int, z) -> np.ndarray | float:
    """Physicists' Hermite polynomial H_n evaluated by upward recurrence.

    H_0 = 1, H_1 = 2z, H_{k+1} = 2 z H_k - 2 k H_{k-1}.  n is capped at 30.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DomainError(f"Hermite order must be a nonnegative integer, got {n!r}")
    if n > MAX_QUANTUM_NUMBER:
        raise DomainError(
            f"Hermite order must not exceed {MAX_QUANTUM_NUMBER}, got {n}"
        )
    z = np.asarray(z, dtype=float)
    h_prev = np.ones_like(z)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * z
    for k in range(1, n):
        h, h_prev = 2.0 * z * h - 2.0 * k * h_prev, h
    return h if h.ndim else float(h)


def wavefunction(
    n: QuantumNumbers,
    modes: NormalModes,
    ns: NormalizedSystem,
    x1,
    x2,
    x3,
    hbar: float | None = None,
) -> np.ndarray | float:
    """Stationary state psi_n evaluated at original coordinates.

    psi is the product over modes of

        (m sigma_i / (pi hbar))^(1/4) / sqrt(2^n_i n_i!)
        * H_{n_i}(sqrt(m sigma_i / hbar) q_i) * exp(-m sigma_i q_i^2 / (2 hbar))

    with q = q(x) the decoupled coordinates.  The change of variables has
    unit Jacobian, so the product is normalized over x as well.  Accepts
    scalar or array coordinates and returns matching shape.  hbar defaults
    to the one carried by the normalized system.
    """
    q = to_normal_coords(x1, x2, x3, ns, modes.angles)
    m = ns.m
    if hbar is None:
        hbar = ns.hbar
    sigmas = modes.sigma
    qs = (q.q1, q.q2, q.q3)
    ordn = n.as_tuple()
    out = 1.0
    for nk, sk, qk in zip(ordn, sigmas, qs):
        alpha = m * sk / hbar
        z = np.sqrt(alpha) * np.asarray(qk)
        norm = (alpha / math.pi) ** 0.25 / math.sqrt(
            (2.0**nk) * math.factorial(nk)
        )
        out = out * norm * hermite_values(nk, z) * np.exp(-0.5 * z * z)
    return out


@dataclass(frozen=True)
class GaussianGroundState:
    """Parameters of psi_0 = N exp(-Q) in the original coordinates.

    The exponent is the quadratic form

        Q = a (mu1 x1)^2 + b (mu2 x2)^2 + c (mu3 x3)^2
            - 2 g12 (mu1 x1)(mu2 x2) - 2 g13 (mu1 x1)(mu3 x3)
            - 2 g23 (mu2 x2)(mu3 x3)

    with a, b, c the diagonal and -g_ij the off-diagonal entries of
    M diag(alpha, beta, gamma) M^T, alpha_i = m sigma_i / (2 hbar).  The
    sign convention keeps the cross-coefficients g_ij positive for weakly
    coupled chains.
    """

    a: float
    b: float
    c: float
    g12: float
    g13: float
    g23: float
    alpha: float
    beta: float
    gamma: float
    mu1: float
    mu2: float
    mu3: float

    def normalization(self) -> float:
        """N = (m varpi / (pi hbar))^(3/4) = (2/pi)^(3/4) (alpha beta gamma)^(1/4)."""
        return (2.0 / math.pi) ** 0.75 * (self.alpha * self.beta * self.gamma) ** 0.25

    def exponent(self, x1, x2, x3) -> np.ndarray | float:
        u1 = self.mu1 * np.asarray(x1)
        u2 = self.mu2 * np.asarray(x2)
        u3 = self.mu3 * np.asarray(x3)
        return (
            self.a * u1**2
            + self.b * u2**2
            + self.c * u3**2
            - 2.0 * self.g12 * u1 * u2
            - 2.0 * self.g13 * u1 * u3
            - 2.0 * self.g23 * u2 * u3
        )

    def evaluate(self, x1, x2, x3) -> np.ndarray | float:
        """Normalized ground-state amplitude at original coordinates."""
        return self.normalization() * np.exp(-self.exponent(x1, x2, x3))


def ground_gaussian(
    modes: NormalModes, ns: NormalizedSystem, hbar: float | None = None
) -> GaussianGroundState:
    """Quadratic-form parameters of the ground state.

    Written in the closed trigonometric form; tests pin it against the
    matrix product M diag(alpha, beta, gamma) M^T.  hbar defaults to the
    one carried by the normalized system.
    """
    if hbar is None:
        hbar = ns.hbar
    alpha = ns.m * modes.sigma1 / (2.0 * hbar)
    beta = ns.m * modes.sigma2 / (2.0 * hbar)
    gamma = ns.m * modes.sigma3 / (2.0 * hbar)
    th, ph, vp = modes.angles.theta, modes.angles.phi, modes.angles.varphi
    ct, st = math.cos(th), math.sin(th)
    cp, sp = math.cos(ph), math.sin(ph)
    cv, sv = math.cos(vp), math.sin(vp)

    a = alpha * ct**2 * cp**2 + beta * sp**2 + gamma * cp**2 * st**2
    b = (
        alpha * (st * sv + ct * cv * sp) ** 2
        + beta * cp**2 * cv**2
        + gamma * (ct * sv - st * cv * sp) ** 2
    )
    c = (
        alpha * (st * cv - ct * sp * sv) ** 2
        + beta * cp**2 * sv**2
        + gamma * (ct * cv + st * sp * sv) ** 2
    )
    g12 = (
        alpha * ct * cp * (st * sv + ct * cv * sp)
        - beta * sp * cp * cv
        - gamma * cp * st * (ct * sv - st * cv * sp)
    )
    g13 = (
        -alpha * ct * cp * (-st * cv + ct * sp * sv)
        + beta * sp * cp * sv
        - gamma * cp * st * (ct * cv + st * sp * sv)
    )
    g23 = (
        alpha * (st * sv + ct * cv * sp) * (-st * cv + ct * sp * sv)
        + beta * cp**2 * cv * sv
        - gamma * (ct * sv - st * cv * sp) * (ct * cv + st * sp * sv)
    )
    return GaussianGroundState(
        a=a, b=b, c=c, g12=g12, g13=g13, g23=g23,
        alpha=alpha, beta=beta, gamma=gamma,
        mu1=ns.mu1, mu2=ns.mu2, mu3=ns.mu3,
    )
