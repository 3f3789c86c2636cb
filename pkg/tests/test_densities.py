import math

import numpy as np
import pytest

from eprdds.densities import (
    MomentumPair,
    corrected_joint,
    corrected_joint_bar,
    corrected_joint_definition,
    joint_momentum_density_asym,
    joint_momentum_density_theta,
    momentum_density_asym,
    momentum_density_theta,
)
from eprdds.numerics import integrate_1d, integrate_2d, momentum_axis, quadrature_marginal
from eprdds.states import AsymParams, ThetaParams, psi_asym_momentum, psi_theta_momentum

GRID41 = np.linspace(-6, 6, 41)


def test_perfect_visibility_has_zero_minima():
    p = ThetaParams(1.0, 1.0, math.pi / 4)
    minima = (2 * np.arange(-3, 4) + 1) * math.pi / (2 * p.h)
    assert np.max(np.abs(momentum_density_theta(p, minima))) < 1e-17


def test_theta_density_normalised():
    p = ThetaParams(1.0, 1.0, math.pi / 12)
    assert integrate_1d(lambda q: momentum_density_theta(p, q), momentum_axis(p.a, p.h)) == pytest.approx(1, abs=1e-8)


@pytest.mark.parametrize("theta", [0.0, math.pi / 6, math.pi / 4])
def test_theta_density_is_marginal_of_psi(theta):
    p = ThetaParams(1.0, 1.0, theta)
    inner = momentum_axis(p.a, p.h)
    marg = quadrature_marginal(lambda u, v: np.abs(psi_theta_momentum(p, u, v)) ** 2, GRID41, inner)
    assert np.max(np.abs(marg.values - momentum_density_theta(p, GRID41))) < 1e-8


def test_joint_theta_bracket_at_origin():
    for theta in (0.0, 0.3, math.pi / 4):
        p = ThetaParams(1.0, 1.0, theta)
        bracket = joint_momentum_density_theta(p, 0.0, 0.0) / (p.b_theta * math.pi / p.a)
        assert bracket == pytest.approx(2 + 2 * p.sin2t, rel=1e-14)


def test_joint_theta_exchange_symmetry_and_norm():
    p = ThetaParams(1.0, 1.0, math.pi / 6)
    u, v = np.meshgrid(GRID41, GRID41 / 2, indexing="ij")
    np.testing.assert_array_equal(joint_momentum_density_theta(p, u, v),
                                  joint_momentum_density_theta(p, v, u))
    ps = momentum_axis(p.a, p.h)
    assert integrate_2d(lambda a, b: joint_momentum_density_theta(p, a, b), ps, ps) == pytest.approx(1, abs=1e-6)


def test_joint_theta_equals_psi_squared():
    p = ThetaParams(0.8, 1.4, 0.35)
    u, v = np.meshgrid(GRID41, GRID41, indexing="ij")
    np.testing.assert_allclose(joint_momentum_density_theta(p, u, v),
                               np.abs(psi_theta_momentum(p, u, v)) ** 2, rtol=1e-12, atol=1e-17)


def test_corrected_joint_matches_definition():
    p = ThetaParams(1.0, 1.0, math.pi / 6)
    rng = np.random.default_rng(3)
    p1, p2 = rng.uniform(-3, 3, size=(2, 9))
    np.testing.assert_allclose(corrected_joint(p, p1 + p2, p1 - p2),
                               corrected_joint_definition(p, p1, p2), rtol=0, atol=1e-10)


def test_corrected_joint_at_quarter_pi():
    p = ThetaParams(1.0, 1.0, math.pi / 4)
    pp, pm = np.meshgrid(GRID41, GRID41 / 3, indexing="ij")
    ah2 = p.ah2
    expected = np.exp(-(pp**2 + pm**2) / (4 * p.a)) / p.c_theta * (
        math.exp(4 * ah2) + 2 * math.exp(2 * ah2) * np.cos(p.h * pp) * np.cos(p.h * pm)
        + 0.5 * (np.cos(2 * p.h * pp) + np.cos(2 * p.h * pm))
    )
    np.testing.assert_allclose(corrected_joint(p, pp, pm), expected, rtol=1e-13, atol=1e-300)


def test_corrected_joint_even_in_sum_and_difference():
    p = ThetaParams(1.0, 0.9, 0.5)
    pp, pm = np.meshgrid(GRID41, GRID41, indexing="ij")
    f = corrected_joint(p, pp, pm)
    np.testing.assert_array_equal(f, corrected_joint(p, -pp, pm))
    np.testing.assert_array_equal(f, corrected_joint(p, pp, -pm))


def test_single_power_correction_differs():
    # the bar variant keeps the theta-zero normalisation and so departs from F~
    p = ThetaParams(1.0, 0.5, math.pi / 6)
    gap = abs(corrected_joint_bar(p, 0.3, -0.2) - corrected_joint(p, 0.1, 0.5))
    assert gap > 1e-6


def test_momentum_pair_round_trip():
    mp = MomentumPair.from_sum_difference(1.5, -0.5)
    assert (mp.p1, mp.p2) == (0.5, 1.0)
    assert (mp.p_plus, mp.p_minus) == (1.5, -0.5)


def test_asym_full_contrast_when_bob_has_no_separation():
    p = AsymParams(1.0, 1.5, 0.7, 0.0)
    q = np.linspace(-3, 3, 31)
    bracket = momentum_density_asym(p, q) / (math.pi * p.g * math.sqrt(2 * math.pi / p.a) * np.exp(-q**2 / (2 * p.a)))
    np.testing.assert_allclose(bracket, 1 + np.cos(2 * p.h1 * q), rtol=1e-13, atol=1e-14)


def test_asym_density_normalised_and_marginal():
    p = AsymParams(1.0, 1.5, 0.5, 2.0)
    assert integrate_1d(lambda q: momentum_density_asym(p, q), momentum_axis(p.a, p.h1)) == pytest.approx(1, abs=1e-8)
    inner = momentum_axis(p.b, p.h2)
    marg = quadrature_marginal(lambda u, v: np.abs(psi_asym_momentum(p, u, v)) ** 2, GRID41, inner)
    assert np.max(np.abs(marg.values - momentum_density_asym(p, GRID41))) < 1e-8


def test_asym_joint_closed_form_matches_psi():
    p = AsymParams(0.7, 1.3, 1.8, 0.9)
    u, v = np.meshgrid(GRID41, GRID41, indexing="ij")
    np.testing.assert_allclose(joint_momentum_density_asym(p, u, v),
                               np.abs(psi_asym_momentum(p, u, v)) ** 2, rtol=1e-12, atol=1e-17)


def test_symmetric_asym_matches_theta_zero_bitwise():
    a, h = 1.0, 1.0
    q = np.linspace(-6, 6, 101)
    np.testing.assert_array_equal(momentum_density_asym(AsymParams(a, h, a, h), q),
                                  momentum_density_theta(ThetaParams(a, h, 0.0), q))
