import math

import numpy as np
import pytest

from eprdds.interferometry import visibility_theta
from eprdds.purification import (
    NoPurificationError,
    matched_visibilities,
    sin_two_theta_raw,
    solve_theta,
    verify_purification,
)
from eprdds.states import AsymParams
from eprdds.verify import random_purifiable


def test_equal_exponents_give_maximal_entanglement():
    res = solve_theta(AsymParams(2.0, 1.0, 0.5, 2.0))
    assert res.sin_two_theta == 0.0 and res.theta == 0.0


def test_bob_without_separation_gives_product_state():
    res = solve_theta(AsymParams(1.0, 1.2, 0.5, 0.0))
    assert res.sin_two_theta == 1.0
    assert res.theta == pytest.approx(math.pi / 4, rel=1e-15)


def test_reference_case():
    p = AsymParams(1.0, 1.5, 0.5, 2.0)
    res = solve_theta(p)
    expected = (math.exp(-4) - math.exp(-4.5)) / (1 - math.exp(-8.5))
    assert res.sin_two_theta == pytest.approx(expected, rel=1e-14)
    assert visibility_theta(res.theta_params(p)).visibility == pytest.approx(math.exp(-4), abs=1e-12)
    assert verify_purification(p, grid_points=41).wigner_gap <= 1e-10


def test_symmetric_state_purifies_exactly():
    res = verify_purification(AsymParams(1.0, 1.0, 1.0, 1.0))
    assert res.theta == 0.0
    assert res.wigner_gap <= 1e-12
    assert res.norm_ratio == pytest.approx(1, abs=1e-14)


def test_wrong_ordering_raises_with_swap_hint():
    p = AsymParams(0.5, 1.0, 1.0, 2.0)
    with pytest.raises(NoPurificationError, match="swap"):
        solve_theta(p)


def test_swap_adapter_purifies_bob():
    p = AsymParams(0.5, 1.0, 1.0, 2.0)
    res = verify_purification(p, allow_swap=True)
    direct = verify_purification(p.swapped())
    assert res.swapped
    assert res.sin_two_theta == direct.sin_two_theta
    assert res.wigner_gap == direct.wigner_gap <= 1e-10
    vt, va = matched_visibilities(p, allow_swap=True)
    assert vt == pytest.approx(va, abs=1e-12)


def test_raw_solution_is_antisymmetric_under_exchange():
    rng = np.random.default_rng(1)
    for a, h1, b, h2 in rng.uniform(0.2, 2.0, size=(20, 4)):
        p = AsymParams(a, h1, b, h2)
        assert sin_two_theta_raw(p) == pytest.approx(-sin_two_theta_raw(p.swapped()), abs=1e-15)


def test_random_sets_match():
    for p in random_purifiable(np.random.default_rng(2), 20):
        vt, va = matched_visibilities(p)
        assert abs(vt - va) <= 1e-12
        assert verify_purification(p).wigner_gap <= 1e-10


def test_no_separation_anywhere():
    res = solve_theta(AsymParams(1.0, 0.0, 1.0, 0.0))
    assert res.sin_two_theta == 1.0
