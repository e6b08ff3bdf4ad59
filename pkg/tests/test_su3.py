import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from triosc import (
    DomainError,
    EulerAngles,
    commutator_residual,
    conjugation_residuals,
    gell_mann,
    matrix_exponential,
    rotation,
    rotation_via_exponentials,
    structure_constant,
)

KNOWN_F = {
    (1, 2, 3): 1.0,
    (1, 4, 7): 0.5,
    (1, 5, 6): -0.5,
    (2, 4, 6): 0.5,
    (2, 5, 7): 0.5,
    (3, 4, 5): 0.5,
    (3, 6, 7): -0.5,
    (4, 5, 8): math.sqrt(3) / 2,
    (6, 7, 8): math.sqrt(3) / 2,
}


def test_gell_mann_basis_properties():
    for j in range(1, 9):
        lam = gell_mann(j)
        assert np.allclose(lam, lam.conj().T)  # hermitian
        assert abs(np.trace(lam)) == 0.0
    for j in range(1, 9):
        for k in range(1, 9):
            expect = 2.0 if j == k else 0.0
            assert np.trace(gell_mann(j) @ gell_mann(k)) == pytest.approx(expect, abs=1e-15)


def test_gell_mann_index_range():
    with pytest.raises(DomainError):
        gell_mann(0)
    with pytest.raises(DomainError):
        gell_mann(9)


def test_structure_constant_table():
    for (j, k, l), value in KNOWN_F.items():
        assert structure_constant(j, k, l) == pytest.approx(value, abs=1e-15)
    # a few that are zero
    assert structure_constant(1, 2, 4) == 0.0
    assert structure_constant(3, 8, 1) == 0.0
    assert structure_constant(1, 1, 2) == 0.0


@given(
    st.integers(min_value=1, max_value=8),
    st.integers(min_value=1, max_value=8),
    st.integers(min_value=1, max_value=8),
)
def test_structure_constant_antisymmetry(j, k, l):
    f = structure_constant(j, k, l)
    assert structure_constant(k, j, l) == -f
    assert structure_constant(k, l, j) == f  # cyclic


def test_commutator_residuals_all_pairs():
    worst = max(commutator_residual(j, k) for j in range(1, 9) for k in range(1, 9))
    assert worst < 1e-12


def test_rotation_orthogonality_and_det(rng):
    for _ in range(50):
        angles = EulerAngles(*rng.uniform(-math.pi, math.pi, size=3))
        rm = rotation(angles)
        assert rm.orthogonality_residual() < 1e-13
        assert rm.det() == pytest.approx(1.0, abs=1e-13)


def test_rotation_matches_exponential_product(rng):
    for _ in range(25):
        angles = EulerAngles(*rng.uniform(-math.pi, math.pi, size=3))
        closed = rotation(angles).m
        via_exp = rotation_via_exponentials(angles).m
        assert np.max(np.abs(closed - via_exp)) < 1e-12


def test_rotation_identity_at_zero():
    assert np.allclose(rotation(EulerAngles(0, 0, 0)).m, np.eye(3), atol=1e-15)


def test_matrix_exponential_against_scipy(rng):
    for _ in range(20):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        ours = matrix_exponential(a)
        ref = scipy.linalg.expm(a)
        assert np.max(np.abs(ours - ref)) < 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_matrix_exponential_known_value():
    # exp of i*t*lambda2 is the standard 2d rotation embedded in the 1-2 block
    t = 0.7
    got = matrix_exponential(1j * t * gell_mann(2))
    expect = np.array([
        [math.cos(t), math.sin(t), 0],
        [-math.sin(t), math.cos(t), 0],
        [0, 0, 1.0],
    ])
    assert np.max(np.abs(got - expect)) < 1e-14


def test_conjugation_identities(rng):
    keys = None
    for _ in range(100):
        theta, phi, varphi = rng.uniform(-math.pi, math.pi, size=3)
        diag = rng.uniform(0.2, 5.0, size=3)
        res = conjugation_residuals(theta, phi, varphi, tuple(diag))
        if keys is None:
            keys = set(res)
            assert len(keys) == 12
        assert max(res.values()) < 1e-12
