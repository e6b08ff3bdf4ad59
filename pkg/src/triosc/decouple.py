"""Normal-mode decomposition of the coupling matrix.

The symmetric matrix R of squared frequencies and couplings is factored as
R = M diag(sigma1^2, sigma2^2, sigma3^2) M^T with M the three-angle
rotation from :mod:`.su3`.  The eigensolve is a hand-rolled cyclic Jacobi
iteration; the orientation of the eigenbasis (column order and signs) is
fixed by a deterministic convention so equal inputs always produce equal
angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, GimbalLockError, InstabilityError
from .model import STABILITY_CUTOFF, CouplingMatrix
from .su3 import EulerAngles, RotationMatrix, _rotation_entries

__all__ = [
    "NormalModes",
    "LogFrequencyParams",
    "forward",
    "jacobi_eigensystem",
    "decouple",
    "extract_angles",
    "log_params",
    "reconstruction_residual",
]

# cos(phi) at or below this is treated as gimbal lock
GIMBAL_COS_PHI = 1e-6
# a candidate orientation must reproduce itself through the closed form
_RECONSTRUCTION_TOL = 1e-10
# relative eigenvalue gap below which modes are flagged degenerate
_DEGENERACY_GAP = 1e-9


@dataclass(frozen=True)
class NormalModes:
    """Decoupled mode frequencies and the rotation that produces them.

    sigma1..sigma3 are the positive normal-mode frequencies in the slot
    order chosen by the orientation convention (not sorted).  degenerate is
    set when two squared frequencies coincide within relative gap 1e-9, in
    which case the angles are one representative of a continuous family.
    """

    sigma1: float
    sigma2: float
    sigma3: float
    angles: EulerAngles
    degenerate: bool = False

    @property
    def sigma(self) -> tuple[float, float, float]:
        return (self.sigma1, self.sigma2, self.sigma3)


@dataclass(frozen=True)
class LogFrequencyParams:
    """Geometric-mean frequency and log-offsets of the three modes.

    varpi = (sigma1 sigma2 sigma3)^(1/3) and d_i = ln(sigma_i / varpi), so
    sigma_i = varpi exp(d_i) and d1 + d2 + d3 = 0.  Only these differences
    are physical; no absolute log-frequency origin is stored.
    """

    varpi: float
    d1: float
    d2: float
    d3: float

    @property
    def d(self) -> tuple[float, float, float]:
        return (self.d1, self.d2, self.d3)


def forward(modes: NormalModes) -> CouplingMatrix:
    """Coupling matrix generated by given modes and angles.

    Implements the closed trigonometric expressions for the six independent
    entries of M diag(sigma^2) M^T.
    """
    s1, s2, s3 = (modes.sigma1**2, modes.sigma2**2, modes.sigma3**2)
    th, ph, vp = modes.angles.theta, modes.angles.phi, modes.angles.varphi
    ct, st = math.cos(th), math.sin(th)
    cp, sp = math.cos(ph), math.sin(ph)
    cv, sv = math.cos(vp), math.sin(vp)
    s2t, s2p, s2v = math.sin(2 * th), math.sin(2 * ph), math.sin(2 * vp)
    c2v = math.cos(2 * vp)

    o11 = s1 * ct**2 * cp**2 + s2 * sp**2 + s3 * cp**2 * st**2
    o22 = (
        s1 * (st * sv + ct * cv * sp) ** 2
        + s2 * cp**2 * cv**2
        + s3 * (ct * sv - st * cv * sp) ** 2
    )
    o33 = (
        s1 * (st * cv - ct * sp * sv) ** 2
        + s2 * cp**2 * sv**2
        + s3 * (ct * cv + st * sp * sv) ** 2
    )
    mix = (s1 - s2) * ct**2 + (s3 - s2) * st**2
    j12 = -0.5 * (s1 - s3) * s2t * cp * sv - 0.5 * mix * s2p * cv
    j13 = 0.5 * mix * s2p * sv - 0.5 * (s1 - s3) * s2t * cp * cv
    j23 = 0.5 * (s1 - s3) * s2t * sp * c2v + 0.5 * s2v * (
        s1 * (st**2 - ct**2 * sp**2) - s2 * cp**2 + s3 * (ct**2 - st**2 * sp**2)
    )
    r = np.array([[o11, j12, j13], [j12, o22, j23], [j13, j23, o33]])
    return CouplingMatrix(r=r)


def jacobi_eigensystem(
    r: np.ndarray, max_sweeps: int = 50
) -> tuple[np.ndarray, np.ndarray, int]:
    """Cyclic Jacobi diagonalization of a symmetric 3x3 matrix.

    Sweeps the (0,1), (0,2), (1,2) pivots until the off-diagonal Frobenius
    norm falls below 1e-14 times the matrix norm.  Returns (eigenvalues,
    eigenvector columns, sweeps used); eigenvalues come out in whatever
    order the rotations leave them.  Raises ConvergenceError with the sweep
    count and final residual if the budget is exhausted.
    """
    rm = np.asarray(r, dtype=float)
    norm = float(np.sqrt((rm * rm).sum()))
    if norm == 0.0:
        return np.zeros(3), np.eye(3), 0
    tol = 1e-14 * norm
    # unpack to plain floats; the 3x3 updates below are branch-light scalar
    # arithmetic and run an order of magnitude faster than array ops
    a = [[float(rm[i, j]) for j in range(3)] for i in range(3)]
    v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    sweeps = 0
    while True:
        off = math.sqrt(
            2.0 * (a[0][1] ** 2 + a[0][2] ** 2 + a[1][2] ** 2)
        )
        if off <= tol:
            break
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps: "
                f"off-diagonal norm {off:.3e} exceeds tolerance {tol:.3e}"
            )
        sweeps += 1
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = a[p][q]
            if apq == 0.0:
                continue
            tau = (a[q][q] - a[p][p]) / (2.0 * apq)
            if tau >= 0.0:
                t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
            else:
                t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            a[p][p] -= t * apq
            a[q][q] += t * apq
            a[p][q] = 0.0
            a[q][p] = 0.0
            k = 3 - p - q
            akp, akq = a[k][p], a[k][q]
            a[k][p] = a[p][k] = c * akp - s * akq
            a[k][q] = a[q][k] = s * akp + c * akq
            for i in range(3):
                vip, viq = v[i][p], v[i][q]
                v[i][p] = c * vip - s * viq
                v[i][q] = s * vip + c * viq
    lam = np.array([a[0][0], a[1][1], a[2][2]])
    return lam, np.array(v), sweeps


# the six column permutations and the four even sign-flip patterns span all
# 24 proper-rotation orientations of a fixed orthonormal eigenbasis
_PERMS = np.array(
    [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
)
_EVEN_SIGNS = np.array(
    [(1.0, 1.0, 1.0), (-1.0, -1.0, 1.0), (-1.0, 1.0, -1.0), (1.0, -1.0, -1.0)]
)


def decouple(cm: CouplingMatrix, max_sweeps: int = 50) -> NormalModes:
    """Factor the coupling matrix into normal modes and rotation angles.

    Raises InstabilityError when the smallest squared frequency does not
    clear the positive-definiteness cutoff.  Among all valid orientations
    of the eigenbasis the one minimizing theta^2 + phi^2 + varphi^2 is
    chosen; exact ties fall back to descending eigenvalue order and then to
    nonnegative M11 (then M22).  Orientations inside the gimbal-locked
    band or failing closed-form reconstruction are never selected.
    """
    norm = cm.norm()
    if norm == 0.0:
        raise InstabilityError("coupling matrix is identically zero")
    lam, vec, _ = jacobi_eigensystem(cm.r, max_sweeps=max_sweeps)
    smallest = float(lam.min())
    if smallest <= STABILITY_CUTOFF * norm:
        raise InstabilityError(
            f"smallest squared mode frequency {smallest:.6e} does not clear "
            f"the stability cutoff {STABILITY_CUTOFF:g} * ||R|| = "
            f"{STABILITY_CUTOFF * norm:.6e}"
        )

    base = np.moveaxis(vec[:, _PERMS], 1, 0)  # (6, 3, 3), columns permuted
    negdet = np.linalg.det(base) < 0.0
    base[negdet, :, 2] *= -1.0
    cands = (base[None, :, :, :] * _EVEN_SIGNS[:, None, None, :]).reshape(24, 3, 3)
    cand_eigs = np.tile(lam[_PERMS], (4, 1))  # (24, 3), slot eigenvalues

    m11, m12, m13 = cands[:, 0, 0], cands[:, 0, 1], cands[:, 0, 2]
    m22, m32 = cands[:, 1, 1], cands[:, 2, 1]
    cos_phi = np.sqrt(np.clip(1.0 - m12 * m12, 0.0, None))
    locked = cos_phi <= GIMBAL_COS_PHI
    phi = np.arcsin(np.clip(m12, -1.0, 1.0))
    theta = np.arctan2(m13, m11)
    varphi = np.arctan2(-m32, m22)
    recon = np.stack(_rotation_entries(theta, phi, varphi), axis=-1).reshape(24, 3, 3)
    residual = np.abs(recon - cands).max(axis=(1, 2))
    valid = ~locked & (residual <= _RECONSTRUCTION_TOL)
    if not valid.any():
        # cannot happen for an orthonormal eigenbasis (at most one column
        # can have |first component| ~ 1); kept as a hard guard
        raise GimbalLockError("every candidate orientation is degenerate")

    angle_norm = theta * theta + phi * phi + varphi * varphi
    best = None
    best_key = None
    for i in range(24):
        if not valid[i]:
            continue
        key = (
            float(angle_norm[i]),
            -float(cand_eigs[i, 0]),
            -float(cand_eigs[i, 1]),
            bool(m11[i] < 0.0),
            bool(m22[i] < 0.0),
            i,
        )
        if best_key is None or key < best_key:
            best_key = key
            best = i

    lam_sorted = np.sort(lam)
    scale = float(np.abs(lam).max())
    degenerate = bool(np.min(np.diff(lam_sorted)) < _DEGENERACY_GAP * scale)
    return NormalModes(
        sigma1=math.sqrt(float(cand_eigs[best, 0])),
        sigma2=math.sqrt(float(cand_eigs[best, 1])),
        sigma3=math.sqrt(float(cand_eigs[best, 2])),
        angles=EulerAngles(
            theta=float(theta[best]), phi=float(phi[best]), varphi=float(varphi[best])
        ),
        degenerate=degenerate,
    )


def extract_angles(m: RotationMatrix | np.ndarray) -> EulerAngles:
    """Angles of a proper rotation in the three-exponential convention.

    phi = asin(M12) in [-pi/2, pi/2], theta = atan2(M13, M11) and
    varphi = atan2(-M32, M22), both in (-pi, pi].  Inside the gimbal band
    |cos phi| <= 1e-6 the decomposition is not unique and GimbalLockError
    states which angle combination remains determined.
    """
    arr = m.m if isinstance(m, RotationMatrix) else np.asarray(m, dtype=float)
    sp = float(np.clip(arr[0, 1], -1.0, 1.0))
    cos_phi = math.sqrt(max(0.0, 1.0 - sp * sp))
    if cos_phi <= GIMBAL_COS_PHI:
        if sp > 0.0:
            family = "phi = +pi/2: only theta - varphi is determined"
        else:
            family = "phi = -pi/2: only theta + varphi is determined"
        raise GimbalLockError(
            f"cos(phi) = {cos_phi:.3e} is inside the gimbal-locked band ({family})"
        )
    return EulerAngles(
        theta=math.atan2(arr[0, 2], arr[0, 0]),
        phi=math.asin(sp),
        varphi=math.atan2(-arr[2, 1], arr[1, 1]),
    )


def log_params(modes: NormalModes) -> LogFrequencyParams:
    """Geometric-mean frequency and the traceless log-offsets."""
    varpi = (modes.sigma1 * modes.sigma2 * modes.sigma3) ** (1.0 / 3.0)
    return LogFrequencyParams(
        varpi=varpi,
        d1=math.log(modes.sigma1 / varpi),
        d2=math.log(modes.sigma2 / varpi),
        d3=math.log(modes.sigma3 / varpi),
    )


def reconstruction_residual(modes: NormalModes, cm: CouplingMatrix) -> float:
    """Relative Frobenius error of forward(modes) against the input matrix."""
    norm = cm.norm()
    if norm == 0.0:
        return float("inf")
    return float(np.linalg.norm(forward(modes).r - cm.r)) / norm
