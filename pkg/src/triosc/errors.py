"""Exception types shared across the library.

All physics-level failures derive from ValueError or RuntimeError so that
callers who do not care about the fine distinctions can catch the builtin
bases.
"""


class DomainError(ValueError):
    """An input lies outside the physical domain.

    The message names the offending field (mass, frequency, quantum number,
    sweep parameter, ...) and the value that was rejected.
    """


class InstabilityError(ValueError):
    """The coupling matrix is not positive definite.

    At least one squared normal-mode frequency is non-positive, so the
    system has no bound ground state and neither spectra nor entanglement
    measures are defined.
    """


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its iteration budget.

    The message reports the iteration count and the residual at abort.
    """


class GimbalLockError(ValueError):
    """Angle extraction hit the degenerate |cos(phi)| ~ 0 locus.

    At phi = +pi/2 only theta - varphi is determined by the matrix, at
    phi = -pi/2 only theta + varphi; the message states which one-parameter
    family applies.
    """


class OracleAccuracyError(RuntimeError):
    """A numerical cross-check detected that its own accuracy is suspect.

    Raised e.g. when the quadrature grid is too coarse for the state being
    integrated, so agreement or disagreement with it would be meaningless.
    """


class PairLimitError(ValueError):
    """A two-oscillator limit check was asked of an unsuitable system.

    The pair-limit formulas apply only when exactly one coupling constant
    is nonzero and it matches the requested pair.
    """
