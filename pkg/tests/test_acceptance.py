"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
"""

import math
import sys

import pytest

from eprdds import verify

# tolerances pinned per criterion
ORACLE_TOL, ORACLE_SECONDS = 1e-8, 10.0
NORM_TOL_LOW, NORM_TOL_4D = 1e-8, 1e-6
REDUCTION_TOL = 1e-12
COMPLEMENTARITY_TOL = 1e-12
PURIFY_VIS_TOL, PURIFY_GAP_TOL, PURIFY_PERM_TOL = 1e-12, 1e-10, 1e-12
MULTIPATH_TOL = 1e-12
MC_V_TOL, MC_SECONDS = 0.01, 60.0
ENVELOPE_TOL = 1e-2

CRITERIA = {
    1: ("oracle closure", lambda: verify.oracle_closure(tol=ORACLE_TOL, time_limit=ORACLE_SECONDS)),
    2: ("normalization", lambda: verify.normalization(tol_low=NORM_TOL_LOW, tol_4d=NORM_TOL_4D)),
    3: ("single-particle reduction", lambda: verify.single_particle_reduction(points=41, tol=REDUCTION_TOL)),
    4: ("complementarity", lambda: verify.complementarity(points=400, tol=COMPLEMENTARITY_TOL)),
    5: ("visibility bounds", lambda: verify.visibility_bounds(n=10)),
    6: ("purification", lambda: verify.purification_check(
        count=20, tol_vis=PURIFY_VIS_TOL, tol_gap=PURIFY_GAP_TOL, tol_perm=PURIFY_PERM_TOL)),
    7: ("multipath identities", lambda: verify.multipath_identities(count=1000, tol=MULTIPATH_TOL)),
    8: ("monte carlo", lambda: verify.monte_carlo(
        n=10**6, tol_v=MC_V_TOL, time_limit=MC_SECONDS, worker_counts=(1, 2, 4))),
    9: ("envelope validity", lambda: verify.envelope_validity(
        ah2_values=(3.0, 4.0, 6.0), tol=ENVELOPE_TOL, caveat_ah2=0.5)),
}


def _line(number, title, check):
    status = "PASS" if check.passed else "FAIL"
    return (f"criterion {number} [{status}] {title}: measured={check.measured:.3e} "
            f"tolerance={check.tolerance:.1e}")


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    title, run = CRITERIA[number]
    check = run()
    with capsys.disabled():
        print("\n" + _line(number, title, check))
    assert check.passed, check.detail


def test_monte_carlo_reports_ks_and_timing():
    check = verify.monte_carlo()
    d = check.detail
    assert d["ks"] <= d["ks_band"]
    assert d["seconds"] < MC_SECONDS
    assert d["workers_invariant"]


def test_envelope_caveat_is_measurably_nonzero():
    check = verify.envelope_validity()
    assert check.detail["caveat"]["max_rel_dev"] > 1e-3


def test_complementarity_marked_cases():
    marked = verify.complementarity().detail["marked"]
    pi6 = marked[f"{math.pi / 6:.6f}"]
    assert pi6["V"] == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    assert pi6["P"] == pytest.approx(3 / 7, abs=1e-12)
    pi12 = marked[f"{math.pi / 12:.6f}"]
    assert pi12["V"] == pytest.approx(0.5, abs=1e-12)


if __name__ == "__main__":
    failures = 0
    for number, (title, run) in sorted(CRITERIA.items()):
        check = run()
        failures += not check.passed
        print(_line(number, title, check))
    sys.exit(1 if failures else 0)
