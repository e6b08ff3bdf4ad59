"""Two-oscillator limits used as analytic checks of the full pipeline.

When exactly one coupling is nonzero the third oscillator decouples and
the remaining pair is solvable with a single mixing angle.  The pair's
squared mode frequencies are k e^{+2 eta} and k e^{-2 eta}; the ground
state of the pair reduced to one member has the classic purity

    P00 = [ (e^-eta cos^2 + e^+eta sin^2)(e^-eta sin^2 + e^+eta cos^2) ]^(-1/2)

These formulas are stated in a convention where the pair coupling J is
twice the off-diagonal entry of the coupling matrix, i.e.
J = d_ij / sqrt(m_i m_j); the 2x2 block then carries J/2.  Callers that
start from a full system must apply that factor, as verify_pair_limit
does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .decouple import decouple
from .entangle import purity
from .errors import InstabilityError, PairLimitError
from .model import OscillatorSystem, coupling_matrix, normalize

__all__ = ["PairParams", "pair_params", "purity_two_body", "verify_pair_limit"]

_PAIRS = {
    "12": (1, 2),
    "13": (1, 3),
    "23": (2, 3),
}


@dataclass(frozen=True)
class PairParams:
    """Geometric-mean stiffness k and log-asymmetry eta of a coupled pair."""

    k: float
    eta: float

    def sigma_high(self) -> float:
        """Larger mode frequency, sqrt(k) e^{+eta}."""
        return math.sqrt(self.k) * math.exp(self.eta)

    def sigma_low(self) -> float:
        """Smaller mode frequency, sqrt(k) e^{-eta}."""
        return math.sqrt(self.k) * math.exp(-self.eta)


def pair_params(w_i: float, w_j: float, j: float) -> PairParams:
    """Mode parameters of two equal-mass oscillators with coupling j.

    k = sqrt(w_i^2 w_j^2 - j^2/4) and
    e^{+-2 eta} = (w_i^2 + w_j^2 +- sqrt((w_i^2 - w_j^2)^2 + j^2)) / (2k),
    so the squared mode frequencies are k e^{+-2 eta}.  Requires
    w_i^2 w_j^2 > j^2 / 4, otherwise the pair has no bound ground state.
    """
    if w_i <= 0.0 or w_j <= 0.0:
        raise InstabilityError(
            f"pair frequencies must be positive, got ({w_i!r}, {w_j!r})"
        )
    wi2, wj2 = w_i * w_i, w_j * w_j
    ksq = wi2 * wj2 - 0.25 * j * j
    if ksq <= 0.0:
        raise InstabilityError(
            f"pair coupling too strong: w_i^2 w_j^2 = {wi2 * wj2:.6e} "
            f"does not exceed j^2/4 = {0.25 * j * j:.6e}"
        )
    k = math.sqrt(ksq)
    disc = math.sqrt((wi2 - wj2) ** 2 + j * j)
    e2eta = (wi2 + wj2 + disc) / (2.0 * k)
    return PairParams(k=k, eta=0.5 * math.log(e2eta))


def purity_two_body(eta: float, angle: float) -> float:
    """Reduced ground-state purity of one member of a coupled pair."""
    c2 = math.cos(angle) ** 2
    s2 = math.sin(angle) ** 2
    em, ep = math.exp(-eta), math.exp(eta)
    return 1.0 / math.sqrt((em * c2 + ep * s2) * (em * s2 + ep * c2))


def _parse_pair(pair) -> tuple[int, int]:
    if isinstance(pair, str):
        key = pair
    elif isinstance(pair, (tuple, list)) and len(pair) == 2:
        key = f"{pair[0]}{pair[1]}"
    else:
        key = ""
    if key not in _PAIRS:
        raise PairLimitError(f"pair must be one of '12', '13', '23', got {pair!r}")
    return _PAIRS[key]


def verify_pair_limit(sys: OscillatorSystem, pair) -> float:
    """|P_full - P00|: full three-body purity against the pair closed form.

    The system must couple exactly the requested pair (its d is the only
    nonzero coupling).  The full pipeline keeps the pair's first member;
    the two-body formula gets eta from pair_params, fed twice the coupling
    matrix off-diagonal per this module's convention, and the mixing angle
    from the full decoupling (phi for pair 12, theta for 13, varphi for 23;
    the purity depends only on its magnitude).
    """
    i, j = _parse_pair(pair)
    couplings = {
        (1, 2): sys.d12,
        (1, 3): sys.d13,
        (2, 3): sys.d23,
    }
    # fully uncoupled input degenerates to 1 on both routes and is allowed
    for key, value in couplings.items():
        if key != (i, j) and value != 0.0:
            raise PairLimitError(
                f"pair {i}{j} requested but d{key[0]}{key[1]} = {value!r} is "
                "also nonzero; the two-body limit needs a single coupled pair"
            )

    ns = normalize(sys)
    modes = decouple(coupling_matrix(ns))
    angle_of_pair = {
        (1, 2): modes.angles.phi,
        (1, 3): modes.angles.theta,
        (2, 3): modes.angles.varphi,
    }
    freqs = (sys.w1, sys.w2, sys.w3)
    j_pair = 2.0 * {
        (1, 2): ns.j12,
        (1, 3): ns.j13,
        (2, 3): ns.j23,
    }[(i, j)]
    pp = pair_params(freqs[i - 1], freqs[j - 1], j_pair)
    p00 = purity_two_body(pp.eta, abs(angle_of_pair[(i, j)]))
    p_full = purity(sys, kept_index=i).purity
    return abs(p_full - p00)
