import math

import numpy as np
import pytest

from eprdds.densities import momentum_density_asym, momentum_density_theta
from eprdds.numerics import integrate_1d, integrate_2d, integrate_4d, momentum_axis, position_axis, trapezoid_weights
from eprdds.states import AsymParams, ThetaParams
from eprdds.wigner import (
    PhasePoint,
    gauss_factors,
    wigner_asym,
    wigner_partial_asym,
    wigner_partial_asym_particle2,
    wigner_partial_theta,
    wigner_partial_theta_particle2,
    wigner_theta,
)

RNG = np.random.default_rng(5)


def test_full_theta_normalised():
    p = ThetaParams(1.0, 1.0, math.pi / 6)
    xs, ps = position_axis(p.a, p.h), momentum_axis(p.a, p.h)
    total = integrate_4d(lambda x1, x2, p1, p2: wigner_theta(p, (x1, x2, p1, p2)), [xs, xs, ps, ps])
    assert total == pytest.approx(1, abs=1e-6)


def test_full_theta_joint_parity():
    p = ThetaParams(0.8, 1.2, 0.4)
    x1, x2, p1, p2 = RNG.uniform(-2, 2, size=(4, 50))
    np.testing.assert_allclose(wigner_theta(p, (x1, x2, p1, p2)), wigner_theta(p, (-x1, -x2, -p1, -p2)),
                               rtol=1e-14, atol=1e-18)


def test_phase_point_and_tuple_agree():
    p = ThetaParams(1.0, 1.0, 0.2)
    assert wigner_theta(p, PhasePoint(0.1, -0.3, 0.5, 1.0)) == wigner_theta(p, (0.1, -0.3, 0.5, 1.0))


def test_full_theta_reduces_to_partial():
    p = ThetaParams(1.0, 1.0, math.pi / 6)
    xs, ps = position_axis(p.a, p.h), momentum_axis(p.a, p.h)
    x1 = np.linspace(-2.5, 2.5, 21)
    p1 = np.linspace(-5, 5, 21)
    wx, wp = trapezoid_weights(xs), trapezoid_weights(ps)
    X2, P2 = np.meshgrid(xs, ps, indexing="ij")
    worst = 0.0
    for u in x1:
        for v in p1:
            marg = wx @ wigner_theta(p, (u, X2, v, P2)) @ wp
            worst = max(worst, abs(marg - wigner_partial_theta(p, u, v)))
    assert worst < 1e-8


def test_quarter_pi_partial_is_single_particle_double_slit():
    a, h = 1.0, 1.0
    p = ThetaParams(a, h, math.pi / 4)
    x, q = np.meshgrid(np.linspace(-3, 3, 41), np.linspace(-6, 6, 41), indexing="ij")
    g = gauss_factors(x, q, a, h)
    single = (g.g_minus + g.g_plus + 2 * g.g_zero * np.cos(2 * h * q)) / (2 * math.pi * (1 + math.exp(-2 * a * h * h)))
    assert np.max(np.abs(wigner_partial_theta(p, x, q) - single)) < 1e-12


@pytest.mark.parametrize("theta", [0.0, math.pi / 6])
def test_partial_theta_position_marginal_is_density(theta):
    p = ThetaParams(1.0, 1.0, theta)
    xs = position_axis(p.a, p.h)
    q = np.linspace(-4, 4, 17)
    marg = trapezoid_weights(xs) @ wigner_partial_theta(p, xs[:, None], q[None, :])
    assert np.max(np.abs(marg - momentum_density_theta(p, q))) < 1e-8


def test_partial_theta_normalised():
    p = ThetaParams(1.0, 1.0, 0.0)
    xs, ps = position_axis(p.a, p.h), momentum_axis(p.a, p.h)
    assert integrate_2d(lambda u, v: wigner_partial_theta(p, u, v), xs, ps) == pytest.approx(1, abs=1e-8)


def test_particle2_partials():
    p = ThetaParams(1.0, 1.0, 0.3)
    assert wigner_partial_theta_particle2(p, 0.2, 0.7) == wigner_partial_theta(p, 0.2, 0.7)
    q = AsymParams(1.0, 1.5, 0.5, 2.0)
    assert wigner_partial_asym_particle2(q, 0.2, 0.7) == wigner_partial_asym(q.swapped(), 0.2, 0.7)


def test_asym_reduces_to_theta_zero():
    a, h = 0.9, 1.1
    x1, x2, p1, p2 = RNG.uniform(-2, 2, size=(4, 50))
    np.testing.assert_allclose(wigner_asym(AsymParams(a, h, a, h), (x1, x2, p1, p2)),
                               wigner_theta(ThetaParams(a, h, 0.0), (x1, x2, p1, p2)), rtol=1e-13, atol=1e-18)


def test_asym_full_normalised():
    p = AsymParams(1.0, 1.5, 0.5, 2.0)
    grids = [position_axis(p.a, p.h1), position_axis(p.b, p.h2), momentum_axis(p.a, p.h1), momentum_axis(p.b, p.h2)]
    total = integrate_4d(lambda x1, x2, p1, p2: wigner_asym(p, (x1, x2, p1, p2)), grids)
    assert total == pytest.approx(1, abs=1e-6)


def test_asym_cross_term_sign():
    p = AsymParams(1.0, 1.5, 0.5, 2.0)
    p1 = 0.3
    p2 = (math.pi - 2 * p.h1 * p1) / (2 * p.h2)
    g1 = gauss_factors(0.0, p1, p.a, p.h1)
    g2 = gauss_factors(0.0, p2, p.b, p.h2)
    expected = p.g * (g1.g_minus * g2.g_minus + g1.g_plus * g2.g_plus) - 2 * p.g * g1.g_zero * g2.g_zero
    assert wigner_asym(p, (0.0, 0.0, p1, p2)) == pytest.approx(float(expected), rel=1e-12)


def test_partial_asym_loses_fringes_when_bob_is_far_apart():
    p = AsymParams(1.0, 1.0, 1.0, 10.0)
    q = math.pi / (2 * p.h1)
    g = gauss_factors(0.0, q, p.a, p.h1)
    assert wigner_partial_asym(p, 0.0, q) == pytest.approx(float(math.pi * p.g * (g.g_minus + g.g_plus)), rel=1e-15)


def test_partial_asym_from_full_and_density():
    p = AsymParams(1.0, 1.5, 0.5, 2.0)
    x2, q2 = position_axis(p.b, p.h2), momentum_axis(p.b, p.h2)
    X2, Q2 = np.meshgrid(x2, q2, indexing="ij")
    w2x, w2q = trapezoid_weights(x2), trapezoid_weights(q2)
    worst = 0.0
    for u in np.linspace(-2.5, 2.5, 11):
        for v in np.linspace(-4, 4, 11):
            marg = w2x @ wigner_asym(p, (u, X2, v, Q2)) @ w2q
            worst = max(worst, abs(marg - wigner_partial_asym(p, u, v)))
    assert worst < 1e-8
    xs = position_axis(p.a, p.h1)
    q = np.linspace(-4, 4, 17)
    marg = trapezoid_weights(xs) @ wigner_partial_asym(p, xs[:, None], q[None, :])
    assert np.max(np.abs(marg - momentum_density_asym(p, q))) < 1e-8


def test_partial_asym_normalised():
    p = AsymParams(0.7, 1.3, 1.8, 0.9)
    assert integrate_2d(lambda u, v: wigner_partial_asym(p, u, v), position_axis(p.a, p.h1),
                        momentum_axis(p.a, p.h1)) == pytest.approx(1, abs=1e-8)
    assert integrate_1d(lambda q: momentum_density_asym(p, q), momentum_axis(p.a, p.h1)) == pytest.approx(1, abs=1e-8)
