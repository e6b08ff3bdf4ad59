import math

import numpy as np
import pytest

from triosc import (
    DomainError,
    EulerAngles,
    GaussianGroundState,
    NormalModes,
    OscillatorSystem,
    QuadratureGrid,
    ReducedDensityParams,
    coupling_matrix,
    decouple,
    extract_angles,
    ground_gaussian,
    log_params,
    normalize,
    purity,
    purity_closed_form,
    purity_from_lw,
    quad_purity,
    reduced_density_params,
    rotation,
)
from triosc.fixtures import (
    MIXED_PURITY_QUAD,
    RAY_PARAMETERS,
    mixed_system,
    strong_coupling_ray,
    tilted_pair_system,
)
from conftest import random_systems

GH_GRID = QuadratureGrid(nodes=64, extent=8.0, scheme="hermite")


def gaussian_of(sys):
    ns = normalize(sys)
    modes = decouple(coupling_matrix(ns))
    return ground_gaussian(modes, ns), modes, ns


def make_gaussian(a, b, c, g12, g13, g23, mu=(1.0, 1.0, 1.0)):
    return GaussianGroundState(
        a=a, b=b, c=c, g12=g12, g13=g13, g23=g23,
        alpha=a, beta=b, gamma=c, mu1=mu[0], mu2=mu[1], mu3=mu[2],
    )


def test_reduced_density_uncoupled():
    g = make_gaussian(0.5, 0.7, 0.9, 0.0, 0.0, 0.0, mu=(1.3, 1.0, 1.0))
    rd = reduced_density_params(g, kept_index=1)
    assert rd.w == 0.0
    assert rd.big_l == pytest.approx(1.3**2 * 0.5, rel=1e-15)


def test_reduced_density_single_cross_term():
    # only Gamma12 on: w = mu^2 Gamma12^2 / B, L = mu^2 (A - Gamma12^2/(2B))
    a, b, g12, mu = 0.6, 0.8, 0.2, 1.1
    g = make_gaussian(a, b, 1.0, g12, 0.0, 0.0, mu=(mu, 1.0, 1.0))
    rd = reduced_density_params(g, kept_index=1)
    assert rd.w == pytest.approx(mu**2 * g12**2 / b, rel=1e-14)
    assert rd.big_l == pytest.approx(mu**2 * (a - g12**2 / (2 * b)), rel=1e-14)


def test_reduced_density_matches_nested_fraction_form():
    # the nested single-fraction layout (with a linear B in the inner
    # denominator) agrees with the Schur-complement route
    for sys in random_systems(40, seed=401):
        g, _, _ = gaussian_of(sys)
        rd = reduced_density_params(g, kept_index=1)
        a, b, c = g.a, g.b, g.c
        g12, g13, g23 = g.g12, g.g13, g.g23
        w_nested = g.mu1**2 * (
            g13**2 / c + (g12 + g13 * g23 / c) ** 2 / (b - g23**2 / c)
        )
        l_nested = g.mu1**2 * (
            a - g13**2 / (2 * c) - (g12 + g13 * g23 / c) ** 2 / (2 * (b - g23**2 / c))
        )
        assert rd.w == pytest.approx(w_nested, rel=1e-12, abs=1e-15)
        assert rd.big_l == pytest.approx(l_nested, rel=1e-12)


def test_reduced_density_matches_matrix_marginalization():
    # independent route: Schur complement done with numpy inverses
    for sys in random_systems(40, seed=402):
        g, _, _ = gaussian_of(sys)
        form = np.array([
            [g.a, -g.g12, -g.g13],
            [-g.g12, g.b, -g.g23],
            [-g.g13, -g.g23, g.c],
        ])
        mus = (g.mu1, g.mu2, g.mu3)
        for kept, others in [(1, (1, 2)), (2, (0, 2)), (3, (0, 1))]:
            k = kept - 1
            rd = reduced_density_params(g, kept_index=kept)
            block = form[np.ix_(others, others)]
            cross = form[k, others]
            shift = cross @ np.linalg.inv(block) @ cross
            assert rd.w == pytest.approx(mus[k] ** 2 * shift, rel=1e-12, abs=1e-15)
            assert rd.big_l == pytest.approx(
                mus[k] ** 2 * (form[k, k] - shift / 2), rel=1e-12
            )


def test_reduced_density_rejects_bad_form():
    with pytest.raises(DomainError):
        reduced_density_params(make_gaussian(1.0, 1.0, 1.0, 0.0, 0.0, 1.5))
    with pytest.raises(DomainError):
        reduced_density_params(make_gaussian(-1.0, 1.0, 1.0, 0, 0, 0))
    g = make_gaussian(1.0, 1.0, 1.0, 0, 0, 0)
    with pytest.raises(DomainError):
        reduced_density_params(g, kept_index=4)


def test_purity_from_lw_examples():
    one = purity_from_lw(ReducedDensityParams(big_l=1.0, w=0.0, kept_index=1))
    assert one.purity == 1.0 and one.linear_entropy == 0.0
    mid = purity_from_lw(ReducedDensityParams(big_l=1.0, w=1.0, kept_index=1))
    assert mid.purity == pytest.approx(math.sqrt(1 / 3), rel=1e-15)
    near = purity_from_lw(ReducedDensityParams(big_l=1.0, w=2.0 - 1e-12, kept_index=1))
    assert 0 < near.purity < 1e-5


def test_purity_from_lw_rejects_unphysical():
    with pytest.raises(DomainError):
        purity_from_lw(ReducedDensityParams(big_l=1.0, w=2.5, kept_index=1))


def test_closed_form_zero_angles_is_separable():
    lp_like = log_params(
        decouple(coupling_matrix(normalize(mixed_system())))
    )
    res = purity_closed_form(lp_like, EulerAngles(0, 0, 0))
    assert res.purity == pytest.approx(1.0, rel=1e-15)


def test_closed_form_matches_lw_route():
    for sys in random_systems(100, seed=403):
        g, modes, ns = gaussian_of(sys)
        lp = log_params(modes)
        for kept in (1, 2, 3):
            via_lw = purity_from_lw(reduced_density_params(g, kept_index=kept))
            via_angles = purity_closed_form(lp, modes.angles, kept_index=kept)
            assert via_lw.purity == pytest.approx(via_angles.purity, abs=1e-12)


def three_factor_product(lp, angles):
    # the fully factorized product over all three rotation rows
    m = rotation(angles).m
    em = np.exp([-lp.d1, -lp.d2, -lp.d3])
    factors = [(em * m[k] ** 2).sum() for k in range(3)]
    return 1.0 / math.sqrt(factors[0] * factors[1] * factors[2])


def test_three_factor_product_is_special_case():
    # exact when the traced pair is uncorrelated (single 1-2 coupling)
    sys = OscillatorSystem(m1=1, m2=1, m3=1, w1=1, w2=1, w3=1.7, d12=1.0)
    g, modes, ns = gaussian_of(sys)
    lp = log_params(modes)
    ref = purity_from_lw(reduced_density_params(g, kept_index=1)).purity
    assert three_factor_product(lp, modes.angles) == pytest.approx(ref, abs=1e-12)
    assert purity_closed_form(lp, modes.angles).purity == pytest.approx(ref, abs=1e-14)


def test_three_factor_product_deviates_generically():
    # with all couplings on, the factorized product overstates the mixing;
    # the two-bracket form stays glued to both the L,w route and quadrature
    g, modes, ns = gaussian_of(mixed_system())
    lp = log_params(modes)
    ref = purity_from_lw(reduced_density_params(g, kept_index=1)).purity
    two_bracket = purity_closed_form(lp, modes.angles).purity
    three_factor = three_factor_product(lp, modes.angles)
    assert two_bracket == pytest.approx(ref, abs=1e-13)
    assert three_factor < ref
    assert abs(three_factor - ref) > 1e-7  # measurably wrong, not roundoff
    assert abs(two_bracket - MIXED_PURITY_QUAD[1]) < 1e-8


def test_purity_end_to_end_uncoupled():
    res = purity(OscillatorSystem(m1=1, m2=2, m3=3, w1=1, w2=2, w3=3))
    assert res.purity == 1.0


def test_purity_regression_fixture():
    for kept in (1, 2, 3):
        res = purity(mixed_system(), kept_index=kept)
        assert res.purity == pytest.approx(MIXED_PURITY_QUAD[kept], abs=1e-8)
        assert res.linear_entropy == pytest.approx(1 - res.purity, abs=1e-15)


def test_purity_against_live_quadrature():
    for sys in random_systems(3, seed=404):
        g, _, _ = gaussian_of(sys)
        for kept in (1, 2, 3):
            analytic = purity_from_lw(reduced_density_params(g, kept_index=kept))
            numeric = quad_purity(g, kept_index=kept, grid=GH_GRID)
            assert analytic.purity == pytest.approx(numeric, abs=1e-6)


def test_purity_bounds():
    for sys in random_systems(50, seed=405, coupling_scale=0.6):
        for kept in (1, 2, 3):
            p = purity(sys, kept_index=kept).purity
            assert 0.0 < p <= 1.0


def test_weak_coupling_approaches_one():
    eps = 1e-4
    for sys in random_systems(10, seed=406):
        weak = OscillatorSystem(
            m1=sys.m1, m2=sys.m2, m3=sys.m3,
            w1=sys.w1, w2=sys.w2, w3=sys.w3,
            d12=eps * sys.d12, d13=eps * sys.d13, d23=eps * sys.d23,
        )
        assert abs(purity(weak).purity - 1.0) < 1e-6


def test_degenerate_modes_give_same_purity():
    # purity is a property of the state, not of the eigenbasis choice
    sys = tilted_pair_system()
    ns = normalize(sys)
    cm = coupling_matrix(ns)
    modes = decouple(cm)
    assert modes.degenerate
    base = purity_from_lw(
        reduced_density_params(ground_gaussian(modes, ns), kept_index=1)
    ).purity
    m = rotation(modes.angles).m
    sig = np.array(modes.sigma)
    # the two unit-frequency modes span a plane; re-mix them arbitrarily
    lo = np.argsort(sig)[:2]
    for chi in (0.3, 0.9, -1.2):
        rot2 = np.eye(3)
        i, j = sorted(lo)
        rot2[i, i] = rot2[j, j] = math.cos(chi)
        rot2[i, j] = -math.sin(chi)
        rot2[j, i] = math.sin(chi)
        alt = m @ rot2
        if np.linalg.det(alt) < 0:
            alt[:, 2] *= -1
        angles = extract_angles(alt)
        alt_modes = NormalModes(
            sigma1=sig[0], sigma2=sig[1], sigma3=sig[2], angles=angles
        )
        recon = rotation(angles).m @ np.diag(sig**2) @ rotation(angles).m.T
        assert np.max(np.abs(recon - cm.r)) < 1e-10
        other = purity_from_lw(
            reduced_density_params(ground_gaussian(alt_modes, ns), kept_index=1)
        ).purity
        assert other == pytest.approx(base, abs=1e-9)


def test_strong_coupling_ray_monotone():
    ps = [purity(sys).purity for sys in strong_coupling_ray()]
    assert len(ps) == len(RAY_PARAMETERS) == 20
    assert all(b < a for a, b in zip(ps, ps[1:]))
    assert ps[-1] < 0.05
