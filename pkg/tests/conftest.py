"""Shared helpers: seeded random-system generators used across modules."""

import numpy as np
import pytest

from triosc import (
    OscillatorSystem,
    coupling_matrix,
    is_stable,
    normalize,
)


def random_systems(count, seed, coupling_scale=0.3):
    """Draw `count` random stable systems from a fixed seed.

    Masses U(0.5, 2.5), frequencies U(0.8, 2.0), couplings N(0, scale);
    unstable draws are rejected so every returned system decouples.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        m = rng.uniform(0.5, 2.5, size=3)
        w = rng.uniform(0.8, 2.0, size=3)
        d = rng.normal(0.0, coupling_scale, size=3)
        sys = OscillatorSystem(
            m1=m[0], m2=m[1], m3=m[2],
            w1=w[0], w2=w[1], w3=w[2],
            d12=d[0], d13=d[1], d23=d[2],
        )
        if is_stable(coupling_matrix(normalize(sys))):
            out.append(sys)
    return out


def random_spd_matrices(count, seed, scale=0.4):
    """Random stable 3x3 coupling matrices (as ndarrays), fixed seed."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        w2 = rng.uniform(0.5, 4.0, size=3)
        off = rng.normal(0.0, scale, size=3)
        r = np.array([
            [w2[0], off[0], off[1]],
            [off[0], w2[1], off[2]],
            [off[1], off[2], w2[2]],
        ])
        if np.linalg.eigvalsh(r).min() > 1e-6 * np.linalg.norm(r):
            out.append(r)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
