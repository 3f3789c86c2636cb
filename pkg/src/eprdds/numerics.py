"""Independent numerical machinery used to check the closed forms.

Nothing here imports the closed-form densities: quadrature, Fourier
transforms, extremum search, rejection sampling and the fringe fit are
generic and receive the functions they test as arguments.  The only
model knowledge is the rejection bound and the fringe frequency, both of
which come straight from the parameters.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize, special

from .states import AsymParams, ThetaParams

__all__ = [
    "OracleFailure",
    "FitError",
    "QuadratureSpec",
    "axis_grid",
    "momentum_axis",
    "position_axis",
    "trapezoid_weights",
    "integrate_1d",
    "integrate_2d",
    "integrate_4d",
    "TabulatedMarginal",
    "quadrature_marginal",
    "fourier_2d",
    "Extremum",
    "ExtremaSearch",
    "locate_extrema",
    "SampleBatch",
    "sample_joint",
    "sample_joint_asym",
    "FringeFit",
    "fit_visibility",
    "tabulated_cdf",
    "ks_distance",
    "ks_critical",
]


class OracleFailure(ArithmeticError):
    """The integrand produced non-finite values."""


class FitError(ValueError):
    """The fringe fit is ill-posed for the given data or parameters."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation and resolution of uniform trapezoidal grids.

    Half widths are in units of the Gaussian sigma of the integrand.  The
    spacing is the smaller of ``sigma / points_per_sigma`` and
    ``fringe_period / points_per_fringe``.
    """

    x_half_width: float = 6.0
    p_half_width: float = 6.0
    points_per_fringe: int = 16
    points_per_sigma: int = 3
    max_points: int = 4001

    def __post_init__(self):
        if self.x_half_width <= 0 or self.p_half_width <= 0:
            raise ValueError("half widths must be positive")
        if self.points_per_fringe < 8:
            raise ValueError("points_per_fringe has a hard floor of 8")
        if self.points_per_sigma < 1 or self.max_points < 3:
            raise ValueError("resolution settings must be positive")


def axis_grid(extent: float, sigma: float, half_width: float, period: float,
              spec: QuadratureSpec) -> np.ndarray:
    """Symmetric uniform grid on ``[-(extent + half_width*sigma), +...]``."""
    span = extent + half_width * sigma
    step = sigma / spec.points_per_sigma
    if math.isfinite(period) and period > 0:
        step = min(step, period / spec.points_per_fringe)
    n = 2 * int(math.ceil(span / step)) + 1
    if n > spec.max_points:
        raise ValueError(f"grid needs {n} points, above max_points={spec.max_points}")
    return np.linspace(-span, span, n)


def _period(h: float) -> float:
    # period of cos(2 h p)
    return math.pi / h if h > 0 else math.inf


def momentum_axis(a: float, h: float, spec: QuadratureSpec = QuadratureSpec(),
                  half_width: float | None = None) -> np.ndarray:
    """Grid for a momentum variable with density ``~ exp(-p^2/2a)`` and ``cos(2hp)`` fringes."""
    hw = spec.p_half_width if half_width is None else half_width
    return axis_grid(0.0, math.sqrt(a), hw, _period(h), spec)


def position_axis(a: float, h: float, spec: QuadratureSpec = QuadratureSpec(),
                  half_width: float | None = None) -> np.ndarray:
    """Grid for a position variable with Gaussians ``exp(-2a(x -+ h)^2)``."""
    hw = spec.x_half_width if half_width is None else half_width
    # the position-side interference factor of the Wigner function is
    # smooth, so only the Gaussian width sets the spacing
    return axis_grid(h, 1.0 / (2 * math.sqrt(a)), hw, math.inf, spec)


def trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    w = np.empty_like(grid)
    d = np.diff(grid)
    w[0], w[-1] = d[0] / 2, d[-1] / 2
    w[1:-1] = (d[:-1] + d[1:]) / 2
    return w


def _check_finite(values):
    if not np.all(np.isfinite(values)):
        raise OracleFailure("integrand returned non-finite values")
    return values


def integrate_1d(f: Callable, grid: np.ndarray) -> float:
    return float(integrate.trapezoid(_check_finite(f(grid)), grid))


def integrate_2d(f: Callable, g1: np.ndarray, g2: np.ndarray) -> float:
    u, v = np.meshgrid(g1, g2, indexing="ij")
    vals = _check_finite(f(u, v))
    return float(trapezoid_weights(g1) @ vals @ trapezoid_weights(g2))


def integrate_4d(f: Callable, grids: Sequence[np.ndarray]) -> float:
    """Tensor-grid trapezoid of ``f(u1, u2, u3, u4)``, one slab of ``u1`` at a time."""
    g1, g2, g3, g4 = grids
    w1 = trapezoid_weights(g1)
    w234 = np.einsum("i,j,k->ijk", trapezoid_weights(g2), trapezoid_weights(g3),
                     trapezoid_weights(g4))
    u2, u3, u4 = np.meshgrid(g2, g3, g4, indexing="ij")
    total = 0.0
    for wi, ui in zip(w1, g1):
        vals = _check_finite(f(ui, u2, u3, u4))
        total += wi * float(np.sum(vals * w234))
    return total


@dataclass(frozen=True)
class TabulatedMarginal:
    points: np.ndarray
    values: np.ndarray
    # change in the values when the integration half width is doubled
    truncation_error: float

    def __call__(self, q):
        return np.interp(q, self.points, self.values)


def quadrature_marginal(density2d: Callable, at, grid: np.ndarray, axis: int = 1,
                        estimate_truncation: bool = True) -> TabulatedMarginal:
    """Integrate ``density2d(u, v)`` over one argument by the trapezoid rule.

    ``axis`` names the argument integrated out (numpy style): ``axis=1``
    integrates over the second argument and tabulates a function of the
    first at the points ``at``.
    """
    at = np.atleast_1d(np.asarray(at, dtype=float))
    if axis not in (0, 1):
        raise ValueError("axis must be 0 or 1")

    def run(g):
        if axis == 1:
            u, v = np.meshgrid(at, g, indexing="ij")
            vals = _check_finite(density2d(u, v))
            return vals @ trapezoid_weights(g)
        u, v = np.meshgrid(g, at, indexing="ij")
        vals = _check_finite(density2d(u, v))
        return trapezoid_weights(g) @ vals

    values = run(grid)
    err = math.nan
    if estimate_truncation:
        step = grid[1] - grid[0]
        half = grid[-1]
        n = int(round(2 * half / step))
        wide = np.linspace(-2 * half, 2 * half, 2 * n + 1)
        err = float(np.max(np.abs(run(wide) - values)))
    return TabulatedMarginal(at, values, err)


def fourier_2d(values: np.ndarray, x1: np.ndarray, x2: np.ndarray, p1, p2) -> np.ndarray:
    """``(1/2pi) Int Int psi(x1, x2) exp(-i (p1 x1 + p2 x2)) dx1 dx2`` on an outer grid.

    ``values`` is ``psi`` sampled on ``meshgrid(x1, x2, indexing='ij')``;
    the result is indexed ``[p1, p2]``.
    """
    p1 = np.atleast_1d(np.asarray(p1, dtype=float))
    p2 = np.atleast_1d(np.asarray(p2, dtype=float))
    k1 = np.exp(-1j * np.outer(p1, x1)) * trapezoid_weights(x1)
    k2 = np.exp(-1j * np.outer(p2, x2)) * trapezoid_weights(x2)
    return k1 @ values @ k2.T / (2 * math.pi)


@dataclass(frozen=True)
class Extremum:
    position: float
    value: float
    kind: str  # "max" or "min"


@dataclass(frozen=True)
class ExtremaSearch:
    extrema: list[Extremum]
    # brackets (lo, hi) in which the derivative showed no sign change
    skipped: list[tuple[float, float]] = field(default_factory=list)

    def maxima(self) -> list[Extremum]:
        return [e for e in self.extrema if e.kind == "max"]

    def minima(self) -> list[Extremum]:
        return [e for e in self.extrema if e.kind == "min"]


def _vectorised(f):
    def call(x):
        x = np.asarray(x, dtype=float)
        try:
            y = np.asarray(f(x), dtype=float)
            if y.shape == x.shape:
                return y
        except (TypeError, ValueError):
            pass
        return np.array([float(f(v)) for v in x.ravel()]).reshape(x.shape)
    return call


def locate_extrema(f: Callable, search_range: tuple[float, float], fringe_period: float,
                   samples_per_period: int = 64) -> ExtremaSearch:
    """Local maxima and minima of a smooth ``f`` inside ``search_range``.

    ``f`` is scanned on a grid of ``samples_per_period`` points per fringe
    period; every slope change is bracketed, narrowed by golden-section
    search and then polished by a root solve on a five-point derivative,
    which pins the position far below the ``sqrt(eps)`` limit of a pure
    value comparison.
    """
    if not fringe_period > 0:
        raise ValueError("fringe_period must be positive")
    lo, hi = map(float, search_range)
    if hi <= lo:
        raise ValueError("empty search range")
    fv = _vectorised(f)
    step = fringe_period / samples_per_period
    n = int(math.ceil((hi - lo) / step)) + 1
    grid = np.linspace(lo, hi, n)
    step = grid[1] - grid[0]
    y = fv(grid)
    slope = np.sign(np.diff(y))
    # carry the previous slope over flat steps
    for i in range(1, slope.size):
        if slope[i] == 0:
            slope[i] = slope[i - 1]
    delta = fringe_period * 1e-3

    def deriv(x):
        pts = fv(np.array([x - 2 * delta, x - delta, x + delta, x + 2 * delta]))
        return (pts[0] - 8 * pts[1] + 8 * pts[2] - pts[3]) / (12 * delta)

    found, skipped = [], []
    for i in range(1, slope.size):
        if slope[i - 1] == slope[i] or slope[i - 1] == 0:
            continue
        kind = "max" if slope[i - 1] > 0 else "min"
        sign = -1.0 if kind == "max" else 1.0
        a, b, c = grid[i - 1], grid[i], grid[i + 1]
        try:
            res = optimize.minimize_scalar(lambda t: sign * fv(np.array([t]))[0],
                                           bracket=(a, b, c), method="golden",
                                           options={"xtol": 1e-10})
            x0 = float(res.x)
        except ValueError:
            # plateau at grid resolution: no strict bracket, fall back to the node
            x0 = b
        if not a <= x0 <= c:
            x0 = b
        x = None
        for lo_b, hi_b in ((max(a, x0 - step / 4), min(c, x0 + step / 4)), (a, c)):
            dl, dh = deriv(lo_b), deriv(hi_b)
            if dl == 0.0 or dh == 0.0:
                x = lo_b if dl == 0.0 else hi_b
                break
            if np.sign(dl) != np.sign(dh):
                x = optimize.brentq(deriv, lo_b, hi_b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
                break
        if x is None:
            skipped.append((a, c))
            continue
        found.append(Extremum(float(x), float(fv(np.array([x]))[0]), kind))
    return ExtremaSearch(found, skipped)


@dataclass(frozen=True)
class SampleBatch:
    seed: int
    samples: np.ndarray  # shape (n, 2): columns p1, p2
    acceptance_rate: float
    params: ThetaParams | AsymParams | None = None
    chunk_size: int = 0

    @property
    def p1(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def p2(self) -> np.ndarray:
        return self.samples[:, 1]

    def __len__(self):
        return self.samples.shape[0]


DEFAULT_CHUNK = 1 << 16
MAX_TRIES_PER_SAMPLE = 10**6


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    # chunk streams depend only on (seed, chunk index), never on the worker
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _rejection_chunk(rng, size, scales, bound, bracket):
    out = np.empty((size, 2))
    filled = 0
    proposed = 0
    while filled < size:
        need = size - filled
        m = int(need * bound * 1.25) + 64
        p = rng.normal(0.0, 1.0, size=(m, 2)) * scales
        u = rng.random(m)
        idx = np.flatnonzero(u * bound < bracket(p[:, 0], p[:, 1]))
        take = idx[:need]
        out[filled:filled + take.size] = p[take]
        proposed += int(take[-1]) + 1 if take.size == need else m
        filled += take.size
        if proposed > MAX_TRIES_PER_SAMPLE * size:
            raise RuntimeError("rejection sampler exceeded its iteration cap")
    return out, proposed


def _run_chunks(n, seed, workers, chunk_size, scales, bound, bracket):
    if n < 1:
        raise ValueError(f"number of samples must be at least 1, got {n}")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    sizes = [chunk_size] * (n // chunk_size)
    if n % chunk_size:
        sizes.append(n % chunk_size)

    def job(k):
        return _rejection_chunk(_chunk_rng(seed, k), sizes[k], scales, bound, bracket)

    if workers == 1:
        parts = [job(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    samples = np.concatenate([s for s, _ in parts])
    proposed = sum(c for _, c in parts)
    return samples, n / proposed


def sample_joint(params: ThetaParams, n: int, seed: int, workers: int = 1,
                 chunk_size: int = DEFAULT_CHUNK) -> SampleBatch:
    """Draw ``(p1, p2)`` screen hits from the joint momentum density.

    Proposals are independent centred Gaussians of variance ``a``; the
    interference bracket is bounded by ``2 + 2 sin(2 theta)``, its value at
    the origin.  Work is cut into fixed chunks with their own seed streams,
    so the output depends on ``(params, n, seed, chunk_size)`` only.
    """
    h, th = params.h, params.theta
    s = params.sin2t
    c2, s2 = math.cos(th) ** 2, math.sin(th) ** 2

    def bracket(p1, p2):
        pp, pm = p1 + p2, p1 - p2
        return (1.0 + c2 * np.cos(2 * h * pp) + 2 * s * np.cos(h * pp) * np.cos(h * pm)
                + s2 * np.cos(2 * h * pm))

    scales = np.array([math.sqrt(params.a)] * 2)
    samples, rate = _run_chunks(n, seed, workers, chunk_size, scales, 2 + 2 * s, bracket)
    return SampleBatch(int(seed), samples, rate, params, chunk_size)


def sample_joint_asym(params: AsymParams, n: int, seed: int, workers: int = 1,
                      chunk_size: int = DEFAULT_CHUNK) -> SampleBatch:
    """Same as :func:`sample_joint` for the asymmetric state (bracket bound 2)."""
    k1, k2 = 2 * params.h1, 2 * params.h2

    def bracket(p1, p2):
        return 1.0 + np.cos(k1 * p1 + k2 * p2)

    scales = np.array([math.sqrt(params.a), math.sqrt(params.b)])
    samples, rate = _run_chunks(n, seed, workers, chunk_size, scales, 2.0, bracket)
    return SampleBatch(int(seed), samples, rate, params, chunk_size)


@dataclass(frozen=True)
class FringeFit:
    baseline: float
    visibility_hat: float
    residual_rms: float
    bins: int = 0
    bin_width: float = math.nan


MIN_FIT_SAMPLES = 10**4
BINS_PER_PERIOD = 24
FIT_RANGE_SIGMAS = 3.0


def fit_visibility(batch, params: ThetaParams | AsymParams,
                   bins_per_period: int = BINS_PER_PERIOD) -> FringeFit:
    """Least-squares fit of ``K (1 + V cos(2 h p1))`` to the ``p1`` histogram.

    Each bin count is divided by the integral of the Gaussian profile
    ``exp(-p1^2/2a)`` over the bin, and the cosine regressor is the
    profile-weighted bin average of ``cos(2 h p1)``, so finite bin width
    does not bias the contrast.  Bins span ``|p1| <= 3 sqrt(a)``.
    """
    p1 = batch.p1 if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    if p1.ndim == 2:
        p1 = p1[:, 0]
    if p1.size < MIN_FIT_SAMPLES:
        raise FitError(f"need at least {MIN_FIT_SAMPLES} samples, got {p1.size}")
    if isinstance(params, AsymParams):
        a, h = params.a, params.h1
    else:
        a, h = params.a, params.h
    if h <= 0:
        raise FitError("degenerate fit: slit separation h = 0 produces no fringes")
    half = FIT_RANGE_SIGMAS * math.sqrt(a)
    width_max = _period(h) / bins_per_period
    nbins = int(math.ceil(2 * half / width_max))
    edges = np.linspace(-half, half, nbins + 1)
    counts, _ = np.histogram(p1, bins=edges)

    lo, hi = edges[:-1], edges[1:]
    r = math.sqrt(2 * a)
    prof = math.sqrt(math.pi * a / 2) * (special.erf(hi / r) - special.erf(lo / r))
    nodes, wts = np.polynomial.legendre.leggauss(16)
    mid, half_w = (hi + lo) / 2, (hi - lo) / 2
    pts = mid[:, None] + half_w[:, None] * nodes[None, :]
    cos_int = half_w * np.sum(wts * np.exp(-pts**2 / (2 * a)) * np.cos(2 * h * pts), axis=1)

    y = counts / prof
    x = cos_int / prof
    w = np.sqrt(prof)
    design = np.column_stack([np.ones_like(x), x]) * w[:, None]
    if np.linalg.cond(design) > 1e8:
        raise FitError("degenerate fit: fringe regressor is collinear with the baseline")
    coef, *_ = np.linalg.lstsq(design, y * w, rcond=None)
    k0, k1 = coef
    if k0 <= 0:
        raise FitError("fitted baseline is not positive")
    resid = (y - (k0 + k1 * x)) * w
    rms = math.sqrt(float(np.sum(resid**2) / np.sum(w**2))) / k0
    return FringeFit(baseline=float(k0) / p1.size, visibility_hat=float(k1 / k0),
                     residual_rms=rms, bins=nbins, bin_width=float(edges[1] - edges[0]))


def tabulated_cdf(density: Callable, grid: np.ndarray) -> Callable:
    """CDF by cumulative trapezoid of ``density`` on ``grid`` (no renormalisation)."""
    vals = _check_finite(np.asarray(density(grid), dtype=float))
    cum = integrate.cumulative_trapezoid(vals, grid, initial=0.0)

    def cdf(q):
        return np.interp(q, grid, cum, left=0.0, right=cum[-1])

    return cdf


def ks_distance(samples, cdf: Callable) -> float:
    """One-sample Kolmogorov-Smirnov statistic against ``cdf``."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    f = cdf(xs)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_critical(n: int, level: float = 0.01) -> float:
    """Asymptotic KS band ``c(level) / sqrt(n)``; ``c(0.01) ~ 1.63``."""
    c = float(special.kolmogi(level))
    return c / math.sqrt(n)
