"""Brute-force numerical cross-checks for the closed-form results.

Nothing here reuses the code paths under test: eigenvalues come from the
characteristic polynomial instead of Jacobi sweeps, normalization and
purity from dense quadrature instead of Gaussian algebra, and the
eigenfunction property from a finite-difference Hamiltonian applied to the
evaluated wavefunction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

from .decouple import NormalModes
from .errors import DomainError, OracleAccuracyError
from .model import NormalizedSystem
from .spectrum import GaussianGroundState, QuantumNumbers, energy, wavefunction
from .su3 import rotation

__all__ = [
    "QuadratureGrid",
    "DEFAULT_GRID",
    "eigen3_charpoly",
    "characteristic_lengths",
    "quad_normalization",
    "quad_purity",
    "fd_hamiltonian_residual",
]


@dataclass(frozen=True)
class QuadratureGrid:
    """Shared quadrature settings.

    nodes: points per axis.  extent: half-width of the integration box in
    units of the relevant characteristic length.  scheme: "legendre" for
    Gauss-Legendre on the finite box, "hermite" for Gauss-Hermite with the
    Gaussian weight folded back into the integrand.
    """

    nodes: int = 64
    extent: float = 8.0
    scheme: str = "legendre"

    def __post_init__(self) -> None:
        if not isinstance(self.nodes, int) or self.nodes < 16:
            raise DomainError(f"nodes must be an integer >= 16, got {self.nodes!r}")
        if not self.extent >= 5.0:
            raise DomainError(f"extent must be >= 5, got {self.extent!r}")
        if self.scheme not in ("legendre", "hermite"):
            raise DomainError(
                f"scheme must be 'legendre' or 'hermite', got {self.scheme!r}"
            )


DEFAULT_GRID = QuadratureGrid()


def eigen3_charpoly(r: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 matrix, descending.

    Solves the characteristic cubic trigonometrically (shift by the mean
    eigenvalue, scale, then the triple-angle cosine identity).  Entirely
    independent of the Jacobi route.
    """
    rm = np.asarray(r, dtype=float)
    if rm.shape != (3, 3):
        raise DomainError(f"expected a 3x3 matrix, got shape {rm.shape}")
    p1 = rm[0, 1] ** 2 + rm[0, 2] ** 2 + rm[1, 2] ** 2
    if p1 == 0.0:
        return np.sort(np.diag(rm))[::-1].copy()
    q = float(np.trace(rm)) / 3.0
    p2 = (rm[0, 0] - q) ** 2 + (rm[1, 1] - q) ** 2 + (rm[2, 2] - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b = (rm - q * np.eye(3)) / p
    detb = (
        b[0, 0] * (b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1])
        - b[0, 1] * (b[1, 0] * b[2, 2] - b[1, 2] * b[2, 0])
        + b[0, 2] * (b[1, 0] * b[2, 1] - b[1, 1] * b[2, 0])
    )
    cos3 = min(1.0, max(-1.0, detb / 2.0))
    phi = math.acos(cos3) / 3.0
    lam1 = q + 2.0 * p * math.cos(phi)
    lam3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    lam2 = 3.0 * q - lam1 - lam3
    return np.array([lam1, lam2, lam3])


def characteristic_lengths(
    modes: NormalModes, ns: NormalizedSystem
) -> tuple[float, float, float]:
    """Per-axis half-width scale of the stationary states.

    The widest mode sets the base length sqrt(hbar / (m sigma_min)); each
    physical axis stretches it by 1/mu_i.
    """
    base = math.sqrt(ns.hbar / (ns.m * min(modes.sigma)))
    return (base / ns.mu1, base / ns.mu2, base / ns.mu3)


def _axis_rule(length: float, grid: QuadratureGrid) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights integrating over one axis with scale `length`."""
    if grid.scheme == "legendre":
        t, w = leggauss(grid.nodes)
        half = grid.extent * length
        return half * t, half * w
    t, w = hermgauss(grid.nodes)
    # fold the exp(-t^2) weight back so plain integrands can be summed
    return length * t, length * w * np.exp(t * t)


def _form_matrix(g: GaussianGroundState) -> np.ndarray:
    return np.array(
        [
            [g.a, -g.g12, -g.g13],
            [-g.g12, g.b, -g.g23],
            [-g.g13, -g.g23, g.c],
        ]
    )


def _gaussian_lengths(g: GaussianGroundState) -> tuple[float, float, float]:
    """Per-axis characteristic half-widths of |psi_0|^2."""
    lam_min = float(eigen3_charpoly(_form_matrix(g))[2])
    if lam_min <= 0.0:
        raise DomainError("ground-state quadratic form is not positive definite")
    base = 1.0 / math.sqrt(lam_min)
    return (base / g.mu1, base / g.mu2, base / g.mu3)


def quad_normalization(
    psi,
    lengths: tuple[float, float, float],
    grid: QuadratureGrid = DEFAULT_GRID,
) -> float:
    """Integral of |psi|^2 over the quadrature box.

    psi is any callable of three coordinate arrays; lengths set the box
    half-width per axis (times grid.extent for the Legendre scheme, as the
    Hermite scale otherwise).
    """
    axes = [_axis_rule(lengths[i], grid) for i in range(3)]
    x1, x2, x3 = np.meshgrid(
        axes[0][0], axes[1][0], axes[2][0], indexing="ij", copy=False
    )
    values = np.asarray(psi(x1, x2, x3), dtype=float)
    w = (
        axes[0][1][:, None, None]
        * axes[1][1][None, :, None]
        * axes[2][1][None, None, :]
    )
    return float((w * values * values).sum())


def quad_purity(
    g: GaussianGroundState,
    kept_index: int = 1,
    grid: QuadratureGrid = DEFAULT_GRID,
) -> float:
    """tr(rho^2) of the reduced ground state by dense quadrature.

    Discretizes rho(x, x') = integral of psi psi' over the two traced
    coordinates on a tensor grid, normalizes by the quadrature trace and
    contracts.  If that trace drifts from 1 by more than 1e-4 the grid
    cannot support the state and OracleAccuracyError is raised instead of
    returning a worthless number.
    """
    if kept_index not in (1, 2, 3):
        raise DomainError(f"kept_index must be 1, 2 or 3, got {kept_index!r}")
    lengths = _gaussian_lengths(g)
    axes = [_axis_rule(lengths[i], grid) for i in range(3)]
    x1, x2, x3 = np.meshgrid(
        axes[0][0], axes[1][0], axes[2][0], indexing="ij", copy=False
    )
    psi = np.asarray(g.evaluate(x1, x2, x3), dtype=float)

    k = kept_index - 1
    psi = np.moveaxis(psi, k, 0)
    w_kept = axes[k][1]
    others = [i for i in range(3) if i != k]
    w_a = np.sqrt(axes[others[0]][1])
    w_b = np.sqrt(axes[others[1]][1])
    flat = (psi * w_a[None, :, None] * w_b[None, None, :]).reshape(grid.nodes, -1)
    rho = flat @ flat.T

    trace = float(w_kept @ np.diag(rho))
    if abs(trace - 1.0) > 1e-4:
        raise OracleAccuracyError(
            f"quadrature trace {trace:.8f} drifted more than 1e-4 from 1; "
            "grid too coarse or box too small for this state"
        )
    rho /= trace
    return float(np.einsum("a,b,ab,ab->", w_kept, w_kept, rho, rho))


# sixth-order central second-difference stencil; the second-order stencil
# leaves O(h^2) truncation around 1e-2 on the pinned 64-point grids, far
# above the thresholds this residual must resolve
_STENCIL = np.array([1.0 / 90.0, -3.0 / 20.0, 1.5, -49.0 / 18.0, 1.5, -3.0 / 20.0, 1.0 / 90.0])


def _second_derivative(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    padded = np.zeros(
        tuple(n + 6 if i == axis else n for i, n in enumerate(values.shape))
    )
    inner = tuple(
        slice(3, 3 + n) if i == axis else slice(None)
        for i, n in enumerate(values.shape)
    )
    padded[inner] = values
    out = np.zeros_like(values)
    for offset, coeff in enumerate(_STENCIL):
        shifted = tuple(
            slice(offset, offset + n) if i == axis else slice(None)
            for i, n in enumerate(values.shape)
        )
        out += coeff * padded[shifted]
    return out / (h * h)


def fd_hamiltonian_residual(
    n: QuantumNumbers,
    modes: NormalModes,
    ns: NormalizedSystem,
    nodes: int = 64,
    extent: float = 6.0,
    energy_shift: float = 0.0,
) -> float:
    """Relative L2 residual of (H - E) psi_n on a finite-difference grid.

    The Hamiltonian acts in the decoupled coordinates, where it separates;
    psi is evaluated through the full coordinate transform at the grid
    points, so the residual probes the wavefunction construction end to
    end.  The grid spans +-extent characteristic lengths per mode with the
    given number of uniform nodes.  energy_shift perturbs E to confirm the
    residual actually detects a wrong eigenvalue.
    """
    if nodes < 8:
        raise DomainError(f"need at least 8 nodes for the stencil, got {nodes}")
    if n.total > 4:
        raise DomainError(
            f"residual check is calibrated for n1+n2+n3 <= 4, got {n.total}"
        )
    m, hbar = ns.m, ns.hbar
    lengths = [math.sqrt(hbar / (m * s)) for s in modes.sigma]
    qs = [np.linspace(-extent * l, extent * l, nodes) for l in lengths]
    hs = [float(q[1] - q[0]) for q in qs]
    q1, q2, q3 = np.meshgrid(qs[0], qs[1], qs[2], indexing="ij", copy=False)

    # invert q = M^T (mu . x):  x_i = (M q)_i / mu_i
    mat = rotation(modes.angles).m
    flat = np.stack([q1.ravel(), q2.ravel(), q3.ravel()])
    xs = mat @ flat
    mu = (ns.mu1, ns.mu2, ns.mu3)
    psi = np.asarray(
        wavefunction(
            n,
            modes,
            ns,
            xs[0] / mu[0],
            xs[1] / mu[1],
            xs[2] / mu[2],
        )
    ).reshape(nodes, nodes, nodes)

    lap = (
        _second_derivative(psi, 0, hs[0])
        + _second_derivative(psi, 1, hs[1])
        + _second_derivative(psi, 2, hs[2])
    )
    potential = (
        0.5
        * m
        * (
            modes.sigma1**2 * q1**2
            + modes.sigma2**2 * q2**2
            + modes.sigma3**2 * q3**2
        )
    )
    h_psi = -(hbar * hbar) / (2.0 * m) * lap + potential * psi
    e = energy(modes, n, hbar=hbar) + energy_shift
    reference = e * psi
    return float(
        np.linalg.norm(h_psi - reference) / np.linalg.norm(reference)
    )
