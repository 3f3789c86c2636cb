"""End-to-end consistency checks of the closed forms against independent numerics.

Each check returns a :class:`Check` carrying the measured worst case and
the tolerance it is held to.  ``run_all`` drives the ``verify`` CLI
subcommand and the acceptance tests.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import densities, interferometry, multipath, purification, states, wigner
from .numerics import (
    QuadratureSpec,
    fit_visibility,
    fourier_2d,
    integrate_1d,
    integrate_2d,
    integrate_4d,
    ks_critical,
    ks_distance,
    locate_extrema,
    momentum_axis,
    position_axis,
    sample_joint,
    tabulated_cdf,
    trapezoid_weights,
)
from .output import csv_string, read_csv
from .states import AsymParams, ThetaParams
from .tables import SCAN_COLUMNS, scan_table

THETA_SWEEP = [
    ThetaParams(1.0, 1.0, math.pi / 6),
    ThetaParams(1.0, 1.0, 0.0),
    ThetaParams(0.5, 2.0, math.pi / 4),
    ThetaParams(2.0, 0.7, math.pi / 12),
    ThetaParams(1.5, 1.2, 0.3),
]
ASYM_SWEEP = [
    AsymParams(1.0, 1.5, 0.5, 2.0),
    AsymParams(2.0, 1.0, 1.0, 0.5),
    AsymParams(0.7, 1.3, 1.8, 0.9),
]

MC_PARAMS = ThetaParams(1.0, 2.0, math.pi / 6)
MC_SAMPLES = 10**6
MC_SEED = 12345


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: measured={self.measured:.3e} tolerance={self.tolerance:.1e}"


def _worst(values) -> float:
    return float(max(values)) if len(values) else 0.0


# -- momentum-space oracle ---------------------------------------------------

def _numeric_momentum_psi(position_fn, a1, h1, a2, h2, p1, p2):
    """Fourier transform of a position wavefunction by 2-d quadrature.

    The position grids reach 12 sigma of ``|psi|^2`` so the transform sees
    ``psi`` itself (twice as wide) down to ``e^{-36}``.
    """
    x1 = position_axis(a1, h1, half_width=12.0)
    x2 = position_axis(a2, h2, half_width=12.0)
    u, v = np.meshgrid(x1, x2, indexing="ij")
    return fourier_2d(position_fn(u, v), x1, x2, p1, p2)


def oracle_closure(theta_sweep=THETA_SWEEP, asym_sweep=ASYM_SWEEP, points: int = 41,
                   tol: float = 1e-8, time_limit: float = 10.0) -> Check:
    t0 = time.perf_counter()
    errs = {}
    for prm in theta_sweep:
        grid = np.linspace(-6 * math.sqrt(prm.a), 6 * math.sqrt(prm.a), points)
        inner = momentum_axis(prm.a, prm.h)

        def pos(u, v, prm=prm):
            return states.psi_theta_position(prm, u, v)

        psi = _numeric_momentum_psi(pos, prm.a, prm.h, prm.a, prm.h, grid, grid)
        u, v = np.meshgrid(grid, grid, indexing="ij")
        errs[f"joint{prm}"] = float(np.max(np.abs(np.abs(psi) ** 2
                                                  - densities.joint_momentum_density_theta(prm, u, v))))
        psi = _numeric_momentum_psi(pos, prm.a, prm.h, prm.a, prm.h, grid, inner)
        marg = (np.abs(psi) ** 2) @ trapezoid_weights(inner)
        errs[f"f_p1{prm}"] = float(np.max(np.abs(marg - densities.momentum_density_theta(prm, grid))))
    for prm in asym_sweep:
        grid = np.linspace(-6 * math.sqrt(prm.a), 6 * math.sqrt(prm.a), points)
        grid2 = np.linspace(-6 * math.sqrt(prm.b), 6 * math.sqrt(prm.b), points)
        inner = momentum_axis(prm.b, prm.h2)

        def pos(u, v, prm=prm):
            return states.psi_asym_position(prm, u, v)

        psi = _numeric_momentum_psi(pos, prm.a, prm.h1, prm.b, prm.h2, grid, grid2)
        u, v = np.meshgrid(grid, grid2, indexing="ij")
        errs[f"joint{prm}"] = float(np.max(np.abs(np.abs(psi) ** 2
                                                  - densities.joint_momentum_density_asym(prm, u, v))))
        psi = _numeric_momentum_psi(pos, prm.a, prm.h1, prm.b, prm.h2, grid, inner)
        marg = (np.abs(psi) ** 2) @ trapezoid_weights(inner)
        errs[f"f_p1{prm}"] = float(np.max(np.abs(marg - densities.momentum_density_asym(prm, grid))))
    elapsed = time.perf_counter() - t0
    worst = _worst(list(errs.values()))
    return Check("oracle_closure", worst <= tol and elapsed < time_limit, worst, tol,
                 {"errors": errs, "seconds": elapsed, "time_limit": time_limit})


# -- normalisation -----------------------------------------------------------

def normalization(theta_density: Callable = densities.momentum_density_theta,
                  asym_density: Callable = densities.momentum_density_asym,
                  theta_params=THETA_SWEEP[:3], asym_params=ASYM_SWEEP[:2],
                  tol_low: float = 1e-8, tol_4d: float = 1e-6) -> Check:
    """Unit mass of every wavefunction, density and Wigner function.

    The density callables are injectable so a corrupted normalisation can
    be shown to trip the check.
    """
    low, high = {}, {}
    for prm in theta_params:
        xs = position_axis(prm.a, prm.h)
        ps = momentum_axis(prm.a, prm.h)
        low[f"psi{prm}"] = integrate_2d(lambda u, v: states.psi_theta_position(prm, u, v) ** 2, xs, xs) - 1
        low[f"f_p1{prm}"] = integrate_1d(lambda q: theta_density(prm, q), ps) - 1
        low[f"joint{prm}"] = integrate_2d(
            lambda u, v: densities.joint_momentum_density_theta(prm, u, v), ps, ps) - 1
        low[f"W1{prm}"] = integrate_2d(lambda u, v: wigner.wigner_partial_theta(prm, u, v), xs, ps) - 1
        high[f"W{prm}"] = integrate_4d(
            lambda x1, x2, p1, p2: wigner.wigner_theta(prm, (x1, x2, p1, p2)), [xs, xs, ps, ps]) - 1
    for prm in asym_params:
        x1, x2 = position_axis(prm.a, prm.h1), position_axis(prm.b, prm.h2)
        q1, q2 = momentum_axis(prm.a, prm.h1), momentum_axis(prm.b, prm.h2)
        low[f"psi{prm}"] = integrate_2d(lambda u, v: states.psi_asym_position(prm, u, v) ** 2, x1, x2) - 1
        low[f"f_p1{prm}"] = integrate_1d(lambda q: asym_density(prm, q), q1) - 1
        low[f"joint{prm}"] = integrate_2d(
            lambda u, v: densities.joint_momentum_density_asym(prm, u, v), q1, q2) - 1
        low[f"W1{prm}"] = integrate_2d(lambda u, v: wigner.wigner_partial_asym(prm, u, v), x1, q1) - 1
        high[f"W{prm}"] = integrate_4d(
            lambda a1, a2, b1, b2: wigner.wigner_asym(prm, (a1, a2, b1, b2)), [x1, x2, q1, q2]) - 1
    worst_low = _worst([abs(v) for v in low.values()])
    worst_high = _worst([abs(v) for v in high.values()])
    passed = worst_low <= tol_low and worst_high <= tol_4d
    # measured is reported against the stricter tolerance
    return Check("normalization", passed, worst_low, tol_low,
                 {"low_dim": low, "four_dim": high, "worst_4d": worst_high, "tol_4d": tol_4d})


# -- single-particle reduction ----------------------------------------------

def single_particle_reduction(cases=((1.0, 1.0), (0.5, 2.0), (3.0, 0.4)), points: int = 41,
                              tol: float = 1e-12) -> Check:
    errs = {}
    for a, h in cases:
        prm = ThetaParams(a, h, math.pi / 4)
        x = np.linspace(-(h + 3 / math.sqrt(a)), h + 3 / math.sqrt(a), points)
        p = np.linspace(-6 * math.sqrt(a), 6 * math.sqrt(a), points)
        u, v = np.meshgrid(x, p, indexing="ij")
        g = wigner.gauss_factors(u, v, a, h)
        single = (g.g_minus + g.g_plus + 2 * g.g_zero * np.cos(2 * h * v)) / (
            2 * math.pi * (1 + math.exp(-2 * a * h * h)))
        errs[f"a={a},h={h}"] = float(np.max(np.abs(wigner.wigner_partial_theta(prm, u, v) - single)))
    worst = _worst(list(errs.values()))
    return Check("single_particle_reduction", worst <= tol, worst, tol, {"errors": errs})


# -- complementarity ---------------------------------------------------------

def _p_identity_form(theta: float) -> float:
    c = math.cos(2 * theta)
    return (c * c + c) / (c * c - c + 2)


def complementarity(a: float = 1.0, h: float = 1.0, points: int = 400, tol: float = 1e-12) -> Check:
    text = csv_string(SCAN_COLUMNS, scan_table(a, h, points), {"a": a, "h": h, "points": points})
    _, cols, data = read_csv(text)
    col = {name: i for i, name in enumerate(cols)}
    theta = data[:, col["theta"]]
    sums = data[:, col["sum_sq"]]
    excess = float(np.max(sums) - 1.0)

    def row(target):
        i = int(np.argmin(np.abs(theta - target)))
        return data[i], abs(theta[i] - target)

    marked = {}
    expected = {
        0.0: (0.0, 1.0),
        math.pi / 12: (math.sin(math.pi / 6), _p_identity_form(math.pi / 12)),
        math.pi / 6: (math.sqrt(3) / 2, 3 / 7),
        math.pi / 4: (1.0, 0.0),
    }
    errs = []
    for target, (v_exp, p_exp) in expected.items():
        r, dist = row(target)
        dv = abs(r[col["V_simple"]] - v_exp)
        dp = abs(r[col["P"]] - p_exp)
        marked[f"{target:.6f}"] = {"V": r[col["V_simple"]], "P": r[col["P"]], "dV": dv, "dP": dp,
                                   "grid_offset": dist}
        errs += [dv, dp, dist]
    end_err = max(abs(sums[0] - 1.0), abs(sums[-1] - 1.0))
    worst = max(excess, end_err, _worst(errs))
    return Check("complementarity", worst <= tol and len(data) == points, worst, tol,
                 {"max_sum_sq_minus_1": excess, "endpoint_error": end_err, "marked": marked,
                  "rows": len(data)})


# -- visibility bounds -------------------------------------------------------

ROUNDING_SLACK = 1e-15


def visibility_bounds(n: int = 10) -> Check:
    worst = 0.0
    for a in np.logspace(-1, 1, n):
        for h in np.linspace(0.0, 3.0, n):
            for th in np.linspace(0.0, math.pi / 4, n):
                prm = ThetaParams(a, h, th)
                v = interferometry.visibility_theta(prm).visibility
                worst = max(worst, prm.sin2t - v, v - 1.0)
    return Check("visibility_bounds", worst <= ROUNDING_SLACK, worst, ROUNDING_SLACK,
                 {"grid": f"{n}x{n}x{n}"})


# -- purification ------------------------------------------------------------

def random_purifiable(rng: np.random.Generator, count: int) -> list[AsymParams]:
    out = []
    while len(out) < count:
        a, b = rng.uniform(0.2, 3.0, size=2)
        h1, h2 = rng.uniform(0.0, 2.5, size=2)
        if b * h2 * h2 <= a * h1 * h1:
            out.append(AsymParams(a, h1, b, h2))
    return out


def purification_check(count: int = 20, seed: int = 7, tol_vis: float = 1e-12,
                       tol_gap: float = 1e-10, tol_perm: float = 1e-12) -> Check:
    rng = np.random.default_rng(seed)
    vis, gaps, perms = [], [], []
    for prm in random_purifiable(rng, count):
        vt, va = purification.matched_visibilities(prm)
        vis.append(abs(vt - va))
        gaps.append(purification.verify_purification(prm, grid_points=41).wigner_gap)
        s_fwd = purification.solve_theta(prm, allow_swap=True).sin_two_theta
        s_rev = purification.solve_theta(prm.swapped(), allow_swap=True).sin_two_theta
        perms.append(abs(s_fwd - s_rev))
    wv, wg, wp = _worst(vis), _worst(gaps), _worst(perms)
    passed = wv <= tol_vis and wg <= tol_gap and wp <= tol_perm
    return Check("purification", passed, wg, tol_gap,
                 {"visibility_mismatch": wv, "tol_visibility": tol_vis,
                  "permutation_mismatch": wp, "tol_permutation": tol_perm, "sets": count})


# -- multipath ---------------------------------------------------------------

def random_ensemble(rng: np.random.Generator, n: int, unit_overlaps: bool = False):
    amps = multipath.normalize_amplitudes(rng.uniform(0.0, 1.0, size=n))
    # re-normalise until the sum of squares is 1 to within the validator's tolerance
    amps = amps / math.sqrt(float(np.sum(amps**2)))
    if unit_overlaps:
        return multipath.PathEnsemble(amps)
    ov = rng.uniform(0.0, 1.0, size=(n, n))
    ov = np.triu(ov, 1)
    ov = ov + ov.T + np.eye(n)
    return multipath.PathEnsemble(amps, ov)


def multipath_identities(count: int = 1000, seed: int = 11, tol: float = 1e-12) -> Check:
    rng = np.random.default_rng(seed)
    dc, pc, gy = [], [], []
    for k in range(count):
        n = int(rng.integers(2, 7))
        e = random_ensemble(rng, n)
        dc.append(abs(multipath.distinguishability(e) ** 2 + multipath.coherence(e) ** 2 - 1))
        u = random_ensemble(rng, n, unit_overlaps=True)
        pc.append(abs(multipath.predictability_n(u) ** 2 + multipath.coherence(u) ** 2 - 1))
        two = random_ensemble(rng, 2)
        p1, p2 = two.amplitudes**2
        gy.append(abs(multipath.predictability_n(two) - abs(p1 - p2)))
    worst = max(_worst(dc), _worst(pc), _worst(gy))
    return Check("multipath_identities", worst <= tol, worst, tol,
                 {"D2_plus_C2": _worst(dc), "P2_plus_C2": _worst(pc), "two_path_P": _worst(gy),
                  "ensembles": count})


# -- Monte Carlo -------------------------------------------------------------

def monte_carlo(params: ThetaParams = MC_PARAMS, n: int = MC_SAMPLES, seed: int = MC_SEED,
                tol_v: float = 0.01, time_limit: float = 60.0, worker_counts=(1, 2, 4),
                invariance_n: int | None = None) -> Check:
    t0 = time.perf_counter()
    batch = sample_joint(params, n, seed, workers=1)
    fit = fit_visibility(batch, params)
    elapsed = time.perf_counter() - t0
    v_true = interferometry.visibility_theta(params).visibility
    dv = abs(fit.visibility_hat - v_true)
    grid = np.linspace(-12 * math.sqrt(params.a), 12 * math.sqrt(params.a), 200001)
    cdf = tabulated_cdf(lambda q: densities.momentum_density_theta(params, q), grid)
    ks = ks_distance(batch.p1, cdf)
    ks_tol = ks_critical(n, 0.01)
    m = n if invariance_n is None else invariance_n
    ref = batch.samples if m == n else sample_joint(params, m, seed, workers=1).samples
    invariant = all(
        np.array_equal(ref, sample_joint(params, m, seed, workers=w).samples)
        for w in worker_counts if w != 1
    )
    passed = dv <= tol_v and ks <= ks_tol and elapsed < time_limit and invariant
    return Check("monte_carlo", passed, dv, tol_v,
                 {"V_hat": fit.visibility_hat, "V_theta": v_true, "ks": ks, "ks_band": ks_tol,
                  "seconds": elapsed, "time_limit": time_limit, "workers_invariant": invariant,
                  "acceptance_rate": batch.acceptance_rate, "seed": seed, "n": n})


# -- envelope validity -------------------------------------------------------

def envelope_deviation(params: ThetaParams, window_sigmas: float = 3.0) -> dict:
    """Worst relative gap between located extrema of ``f_{p1,theta}`` and the envelopes.

    Each extremum value is compared with the matching envelope at the same
    momentum, relative to the upper envelope there (the fringe scale; the
    lower envelope vanishes at ``theta = pi/4``).
    """
    env = interferometry.one_particle_envelopes(params)
    half = window_sigmas * math.sqrt(params.a)
    search = locate_extrema(lambda q: densities.momentum_density_theta(params, q),
                            (-half, half), math.pi / params.h)
    devs = []
    for e in search.extrema:
        ref = env.upper(e.position) if e.kind == "max" else env.lower(e.position)
        devs.append(abs(e.value - ref) / env.upper(e.position))
    return {"extrema": len(search.extrema), "skipped": len(search.skipped),
            "max_rel_dev": _worst(devs)}


def envelope_validity(ah2_values=(3.0, 4.0, 6.0), thetas=(math.pi / 12, math.pi / 6, math.pi / 4),
                      a: float = 1.0, tol: float = 1e-2, caveat_ah2: float = 0.5) -> Check:
    cases = {}
    for ah2 in ah2_values:
        for th in thetas:
            prm = ThetaParams(a, math.sqrt(ah2 / a), th)
            cases[f"ah2={ah2},theta={th:.4f}"] = envelope_deviation(prm)
    worst = _worst([c["max_rel_dev"] for c in cases.values()])
    caveat = envelope_deviation(ThetaParams(a, math.sqrt(caveat_ah2 / a), math.pi / 6))
    passed = worst <= tol and caveat["max_rel_dev"] > 0
    return Check("envelope_validity", passed, worst, tol,
                 {"cases": cases, "caveat_ah2": caveat_ah2, "caveat": caveat})


ALL_CHECKS = {
    "oracle_closure": oracle_closure,
    "normalization": normalization,
    "single_particle_reduction": single_particle_reduction,
    "complementarity": complementarity,
    "visibility_bounds": visibility_bounds,
    "purification": purification_check,
    "multipath_identities": multipath_identities,
    "monte_carlo": monte_carlo,
    "envelope_validity": envelope_validity,
}


def run_all(names=None) -> list[Check]:
    selected = ALL_CHECKS if not names else {k: ALL_CHECKS[k] for k in names}
    return [fn() for fn in selected.values()]
