"""Ground-state entanglement of one oscillator against the other two.

Tracing two coordinates out of the Gaussian ground state leaves a 1D
Gaussian mixed state whose purity has the closed form

    P = sqrt((2L - w) / (2L + w)),    S_lin = 1 - P

with L and w obtained by completing the square in the traced coordinates.
An equivalent form uses only the log-frequency offsets and the rotation
row of the kept coordinate.  Both routes are implemented; they agree to
machine precision and are cross-checked against brute-force quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .decouple import LogFrequencyParams, decouple, log_params
from .errors import DomainError
from .model import OscillatorSystem, coupling_matrix, normalize
from .spectrum import GaussianGroundState, ground_gaussian
from .su3 import EulerAngles, rotation

__all__ = [
    "ReducedDensityParams",
    "PurityResult",
    "reduced_density_params",
    "purity_from_lw",
    "purity_closed_form",
    "purity",
]


@dataclass(frozen=True)
class ReducedDensityParams:
    """Coefficients of the reduced density matrix for one kept oscillator.

    rho(x, x') = sqrt((2L - w)/pi) exp(-L (x^2 + x'^2) + w x x') in the
    kept physical coordinate; kept_index records which oscillator (1..3)
    was kept.
    """

    big_l: float
    w: float
    kept_index: int


@dataclass(frozen=True)
class PurityResult:
    """Purity and linear entropy of a reduced ground state."""

    purity: float
    linear_entropy: float
    kept_index: int

    @property
    def entropy(self) -> float:
        """Alias used by the CSV/JSON layer."""
        return self.linear_entropy


def _relabeled(g: GaussianGroundState, kept_index: int):
    """Quadratic-form coefficients with the kept coordinate rotated first.

    Cyclic relabeling keeps the form itself unchanged, so formulas written
    for "keep oscillator 1" apply verbatim afterwards.
    """
    if kept_index == 1:
        return g.a, g.b, g.c, g.g12, g.g13, g.g23, g.mu1
    if kept_index == 2:
        return g.b, g.c, g.a, g.g23, g.g12, g.g13, g.mu2
    if kept_index == 3:
        return g.c, g.a, g.b, g.g13, g.g23, g.g12, g.mu3
    raise DomainError(f"kept_index must be 1, 2 or 3, got {kept_index!r}")


def reduced_density_params(
    g: GaussianGroundState, kept_index: int = 1
) -> ReducedDensityParams:
    """Trace out the two non-kept coordinates of the ground Gaussian.

    Completing the square in the traced pair (a Schur complement of their
    2x2 block, with joint denominator B C - Gamma23^2 entering linearly)
    gives

        w = mu^2 (C Gamma12^2 + 2 Gamma23 Gamma12 Gamma13 + B Gamma13^2)
                / (B C - Gamma23^2)
        L = mu^2 A - w / 2

    where (A, B, C, Gamma) are the relabeled form coefficients and mu the
    kept coordinate's mass scale factor.  Requires the quadratic form to be
    positive definite.
    """
    a, b, c, g12, g13, g23, mu = _relabeled(g, kept_index)
    # leading principal minors of the form matrix
    if not (a > 0.0 and b > 0.0 and c > 0.0):
        raise DomainError("ground-state quadratic form has a non-positive diagonal")
    det2 = b * c - g23 * g23
    det3 = (
        a * det2
        - g12 * (g12 * c - g23 * g13)
        + g13 * (-(g12 * g23) + b * g13)
    )
    if det2 <= 0.0 or det3 <= 0.0:
        raise DomainError("ground-state quadratic form is not positive definite")
    mu2 = mu * mu
    w = mu2 * (c * g12 * g12 + 2.0 * g23 * g12 * g13 + b * g13 * g13) / det2
    big_l = mu2 * a - 0.5 * w
    return ReducedDensityParams(big_l=big_l, w=w, kept_index=kept_index)


def purity_from_lw(rd: ReducedDensityParams) -> PurityResult:
    """P = sqrt((2L - w)/(2L + w)) for a Gaussian reduced density matrix."""
    lo = 2.0 * rd.big_l - rd.w
    hi = 2.0 * rd.big_l + rd.w
    if lo <= 0.0 or hi <= 0.0:
        raise DomainError(
            f"reduced density parameters are unphysical: 2L-w = {lo!r}, 2L+w = {hi!r}"
        )
    p = math.sqrt(lo / hi)
    return PurityResult(purity=p, linear_entropy=1.0 - p, kept_index=rd.kept_index)


def purity_closed_form(
    lp: LogFrequencyParams, angles: EulerAngles, kept_index: int = 1
) -> PurityResult:
    """Purity from log-frequency offsets and rotation angles alone.

    With row k of the rotation written (r1, r2, r3),

        P = [ (sum_i e^{-d_i} r_i^2) (sum_i e^{+d_i} r_i^2) ]^(-1/2).

    The first bracket is the familiar sum of e^{-d_i} over the squared row
    entries; its partner is the same sum with the exponent signs flipped.
    A fully factorized three-term product over the rows (replacing the
    second bracket by the product of the other two rows' e^{+d} sums) holds
    only when the traced pair carries no residual correlation and
    overstates the mixing otherwise; the pairwise-coupling limits are
    inside that special case, generic systems are not.  See the
    corresponding regression test for the measured gap.
    """
    if kept_index not in (1, 2, 3):
        raise DomainError(f"kept_index must be 1, 2 or 3, got {kept_index!r}")
    row = rotation(angles).m[kept_index - 1]
    r2 = row * row
    em = (math.exp(-lp.d1), math.exp(-lp.d2), math.exp(-lp.d3))
    f = em[0] * r2[0] + em[1] * r2[1] + em[2] * r2[2]
    g = r2[0] / em[0] + r2[1] / em[1] + r2[2] / em[2]
    p = 1.0 / math.sqrt(f * g)
    return PurityResult(purity=p, linear_entropy=1.0 - p, kept_index=kept_index)


def purity(sys: OscillatorSystem, kept_index: int = 1) -> PurityResult:
    """End-to-end ground-state purity of one oscillator in a coupled triple."""
    ns = normalize(sys)
    modes = decouple(coupling_matrix(ns))
    g = ground_gaussian(modes, ns)
    rd = reduced_density_params(g, kept_index=kept_index)
    result = purity_from_lw(rd)
    # machine-precision consistency with the angle-space form is enforced
    # by tests; returning the L,w route keeps the dependency chain shortest
    return result
