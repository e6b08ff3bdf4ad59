"""Named reference systems shared by tests, docs and the verify command.

The frozen numbers below were produced by the quadrature oracle at commit
time (64-node Gauss-Hermite, extent 8) and act as drift detectors: the
closed-form pipeline must keep reproducing them.
"""

from __future__ import annotations

import math

from .model import OscillatorSystem

__all__ = [
    "unit_system",
    "tilted_pair_system",
    "mixed_system",
    "acceptance_fixtures",
    "strong_coupling_ray",
    "RAY_PARAMETERS",
    "MIXED_PURITY_QUAD",
    "MIXED_GROUND_ENERGY",
    "SWEEP_FIXTURE",
    "SWEEP_PURITY",
]


def unit_system() -> OscillatorSystem:
    """Three identical uncoupled unit oscillators."""
    return OscillatorSystem(m1=1.0, m2=1.0, m3=1.0, w1=1.0, w2=1.0, w3=1.0)


def tilted_pair_system() -> OscillatorSystem:
    """Unit masses with a single 1-3 coupling.

    Its coupling matrix is [[2,0,-1],[0,1,0],[-1,0,2]]: squared mode
    frequencies (3, 1, 1) at theta = pi/4, a degenerate pair.
    """
    return OscillatorSystem(
        m1=1.0,
        m2=1.0,
        m3=1.0,
        w1=math.sqrt(2.0),
        w2=1.0,
        w3=math.sqrt(2.0),
        d13=-2.0,
    )


def mixed_system() -> OscillatorSystem:
    """Unequal masses and frequencies with all three couplings on."""
    return OscillatorSystem(
        m1=1.0,
        m2=2.0,
        m3=3.0,
        w1=1.0,
        w2=1.5,
        w3=2.0,
        d12=0.4,
        d13=0.3,
        d23=0.2,
    )


def acceptance_fixtures() -> tuple[OscillatorSystem, OscillatorSystem, OscillatorSystem]:
    """The three systems the heavyweight numerical gates run on."""
    return (unit_system(), tilted_pair_system(), mixed_system())


# log-spaced approach to the instability at t = 1 along D = (2t, 2t, 2t):
# 1 - t runs from 0.5 down to 1e-8 over twenty points
RAY_PARAMETERS: tuple[float, ...] = tuple(
    1.0 - 0.5 * (2e-8) ** (j / 19.0) for j in range(20)
)


def strong_coupling_ray() -> list[OscillatorSystem]:
    """Unit oscillators pushed toward instability along equal couplings.

    At t = 1 the coupling matrix gains a zero eigenvalue; the last point
    sits 1e-8 short of it and is still stable, with the kept oscillator
    almost maximally mixed.
    """
    return [
        OscillatorSystem(
            m1=1.0, m2=1.0, m3=1.0, w1=1.0, w2=1.0, w3=1.0,
            d12=2.0 * t, d13=2.0 * t, d23=2.0 * t,
        )
        for t in RAY_PARAMETERS
    ]


# quadrature-oracle purities of mixed_system(), per kept oscillator
MIXED_PURITY_QUAD: dict[int, float] = {
    1: 0.9987317605819613,
    2: 0.9989166839802903,
    3: 0.9997785840621066,
}

# ground-state energy of mixed_system()
MIXED_GROUND_ENERGY: float = 2.2483231512536994

# canonical sweep: unit system, d12 from 0 to just short of the
# instability at d12 = 2, twenty evenly spaced points
SWEEP_FIXTURE: dict[str, float | int | str] = {
    "parameter": "couplings.d12",
    "start": 0.0,
    "stop": 1.9,
    "steps": 20,
}

# purity column of that sweep, strictly decreasing; the point at
# d12 = 1.6 equals sqrt(3)/2 exactly in the two-body closed form
SWEEP_PURITY: tuple[float, ...] = (
    1.0,
    0.9996870597977933,
    0.9987429205376082,
    0.9971513498967134,
    0.9948843428577827,
    0.9919005845644688,
    0.9881430555108647,
    0.9835354782081003,
    0.9779771149621037,
    0.9713351126071686,
    0.9634330440022852,
    0.9540332978387839,
    0.9428090415820634,
    0.929297520981269,
    0.9128176670522957,
    0.8923135029870215,
    0.8660254037844387,
    0.8306960230720886,
    0.7791890281664527,
    0.6898550972662296,
)
