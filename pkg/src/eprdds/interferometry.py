"""Fringe envelopes, visibility and predictability for the double-double slit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import THETA_MAX, AsymParams, ThetaParams

__all__ = [
    "ENVELOPE_REGIME_AH2",
    "EnvelopePair",
    "VisibilityReport",
    "TwoParticleEnvelopes",
    "ComplementarityRecord",
    "one_particle_envelopes",
    "visibility_theta",
    "visibility_asym",
    "two_particle_envelopes",
    "predictability_theta",
    "predictability_exact",
    "complementarity",
    "complementarity_scan",
]

# e^{-2ah^2} <= 2.5e-3 from here on
ENVELOPE_REGIME_AH2 = 3.0


@dataclass(frozen=True)
class EnvelopePair:
    """Upper/lower envelope coefficients on a shared Gaussian profile.

    The envelopes are ``coeff * exp(-q^2 / (2 * gaussian_var))`` where ``q``
    is ``p1`` for one-particle fringes and ``p+`` for two-particle fringes.
    """

    upper_coeff: float
    lower_coeff: float
    gaussian_var: float
    regime_ok: bool = True

    def profile(self, q):
        q = np.asarray(q, dtype=float)
        return np.exp(-q * q / (2 * self.gaussian_var))

    def upper(self, q):
        return self.upper_coeff * self.profile(q)

    def lower(self, q):
        return self.lower_coeff * self.profile(q)

    @property
    def ratio(self) -> float:
        if self.lower_coeff == 0:
            return math.inf
        return self.upper_coeff / self.lower_coeff

    @property
    def contrast(self) -> float:
        return (self.upper_coeff - self.lower_coeff) / (self.upper_coeff + self.lower_coeff)


@dataclass(frozen=True)
class VisibilityReport:
    visibility: float
    ratio: float
    regime_ok: bool


def _regime_ok(ah2: float) -> bool:
    return ah2 >= ENVELOPE_REGIME_AH2


def one_particle_envelopes(params: ThetaParams) -> EnvelopePair:
    """Envelopes of ``f_{p1,theta}`` from setting ``cos(2 h p1) = +-1``."""
    s, e = params.sin2t, params.overlap
    k = math.pi * math.sqrt(2 * math.pi / params.a) * params.b_theta
    return EnvelopePair(
        upper_coeff=k * (1 + e) * (1 + s),
        lower_coeff=k * (1 - e) * (1 - s),
        gaussian_var=params.a,
        regime_ok=_regime_ok(params.ah2),
    )


def visibility_theta(params: ThetaParams) -> VisibilityReport:
    s, e = params.sin2t, params.overlap
    vis = (e + s) / (1 + e * s)
    if s >= 1.0 or params.ah2 == 0.0:
        ratio = math.inf
    else:
        ratio = (1 + s) / ((1 - s) * math.tanh(params.ah2))
    return VisibilityReport(visibility=vis, ratio=ratio, regime_ok=_regime_ok(params.ah2))


def visibility_asym(params: AsymParams) -> VisibilityReport:
    """Alice's visibility ``exp(-2 b h2^2)``, set entirely by Bob's side."""
    bh2 = params.bob_exponent
    vis = math.exp(-2 * bh2)
    ratio = math.inf if bh2 == 0.0 else 1.0 / math.tanh(bh2)
    return VisibilityReport(visibility=vis, ratio=ratio, regime_ok=_regime_ok(params.alice_exponent))


@dataclass(frozen=True)
class TwoParticleEnvelopes:
    """Envelopes of ``F~_theta`` along ``p- = 0`` (profile ``exp(-p+^2/4a)``).

    ``exact`` holds the closed forms obtained at ``h p+ = 2 pi n`` (upper)
    and ``h p+ = pi/2 + 2 pi n`` (lower); ``simplified`` the large ``a h^2``
    forms.  The exact lower coefficient is negative when ``theta`` is below
    about ``2 exp(-2ah^2)``, since ``F~`` is not a density.
    """

    exact: EnvelopePair
    simplified: EnvelopePair


def two_particle_envelopes(params: ThetaParams) -> TwoParticleEnvelopes:
    s, c = params.sin2t, params.cos2t
    e2 = params.overlap
    e4 = math.exp(-4 * params.ah2)
    # N_theta * e^{4ah^2}
    n = 1.0 / (8 * math.pi * params.a * params.cosh_shift**2)
    upper = n * (2 * e4 + 2 - s * s * (e2 - 1) ** 2)
    lower = n * (1 - c * (e4 + 1 + 2 * s * e2 - c * e4))
    ok = _regime_ok(params.ah2)
    var = 2 * params.a
    return TwoParticleEnvelopes(
        exact=EnvelopePair(upper, lower, var, ok),
        simplified=EnvelopePair(n * (1 + c * c), n * (1 - c), var, ok),
    )


def predictability_theta(theta: float) -> float:
    """Two-particle fringe contrast ``P_theta`` from the simplified envelopes."""
    theta = float(theta)
    if not (0.0 <= theta <= THETA_MAX * (1 + 4e-16)):
        raise ValueError(f"theta must lie in [0, pi/4], got {theta!r}")
    c = math.cos(2 * theta)
    return c * math.cos(theta) ** 2 / (1 - c * math.sin(theta) ** 2)


def predictability_exact(params: ThetaParams) -> float:
    """``(env+ - env-) / (env+ + env-)`` with the exact two-particle envelopes."""
    return two_particle_envelopes(params).exact.contrast


@dataclass(frozen=True)
class ComplementarityRecord:
    theta: float
    v_simple: float
    p: float
    sum_sq: float
    holds: bool
    v_envelope: float
    sum_sq_envelope: float


COMPLEMENTARITY_SLACK = 1e-12


def complementarity(params: ThetaParams) -> ComplementarityRecord:
    """``P^2 + V^2`` with ``V = sin(2 theta)``; the envelope ``V_theta`` variant is diagnostic only."""
    v = params.sin2t
    p = predictability_theta(params.theta)
    v_env = visibility_theta(params).visibility
    total = p * p + v * v
    return ComplementarityRecord(
        theta=params.theta,
        v_simple=v,
        p=p,
        sum_sq=total,
        holds=total <= 1 + COMPLEMENTARITY_SLACK,
        v_envelope=v_env,
        sum_sq_envelope=p * p + v_env * v_env,
    )


def complementarity_scan(a: float, h: float, points: int = 400) -> list[ComplementarityRecord]:
    """Sweep ``theta`` uniformly over ``[0, pi/4]`` (endpoints included).

    With ``points - 1`` divisible by 3 the sweep hits ``pi/12`` and
    ``pi/6`` as grid nodes, which the default of 400 does.
    """
    if points < 2:
        raise ValueError("need at least two sweep points")
    thetas = np.linspace(0.0, THETA_MAX, points)
    return [complementarity(ThetaParams(a, h, float(t))) for t in thetas]
