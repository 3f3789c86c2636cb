"""Far-field (momentum) probability densities of the double-double-slit states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import AsymParams, ThetaParams

__all__ = [
    "MomentumPair",
    "momentum_density_theta",
    "joint_momentum_density_theta",
    "corrected_joint",
    "corrected_joint_definition",
    "corrected_joint_bar",
    "momentum_density_asym",
    "joint_momentum_density_asym",
]


@dataclass(frozen=True)
class MomentumPair:
    p1: float
    p2: float

    @property
    def p_plus(self):
        return self.p1 + self.p2

    @property
    def p_minus(self):
        return self.p1 - self.p2

    @classmethod
    def from_sum_difference(cls, p_plus, p_minus):
        return cls((p_plus + p_minus) / 2, (p_plus - p_minus) / 2)


def _fringe_density(p, a, h, norm, alpha, beta):
    # norm * sqrt(2 pi / a) * exp(-p^2 / 2a) * (alpha + beta cos(2 h p))
    p = np.asarray(p, dtype=float)
    return norm * math.sqrt(2 * math.pi / a) * np.exp(-p * p / (2 * a)) * (
        alpha + beta * np.cos(2 * h * p)
    )


def momentum_density_theta(params: ThetaParams, p1):
    """One-particle momentum density ``f_{p1,theta}``."""
    s, e = params.sin2t, params.overlap
    return _fringe_density(p1, params.a, params.h, math.pi * params.b_theta, 1.0 + s * e, e + s)


def joint_momentum_density_theta(params: ThetaParams, p1, p2):
    """Joint momentum density ``f_{p1 p2, theta}``."""
    a, h, th = params.a, params.h, params.theta
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    pp, pm = p1 + p2, p1 - p2
    bracket = (
        1.0
        + math.cos(th) ** 2 * np.cos(2 * h * pp)
        + 2 * params.sin2t * np.cos(h * pp) * np.cos(h * pm)
        + math.sin(th) ** 2 * np.cos(2 * h * pm)
    )
    return params.b_theta * (math.pi / a) * np.exp(-(p1**2 + p2**2) / (2 * a)) * bracket


def corrected_joint(params: ThetaParams, p_plus, p_minus):
    """Corrected joint probability ``F~_theta(p+, p-)`` in sum/difference form.

    Every ``e^{k a h^2}`` is carried as ``e^{(k-4) a h^2}`` against the
    ``e^{4 a h^2}`` pulled out of ``C_theta`` so nothing overflows.  The
    ``cos(2 h p+)`` and ``cos(2 h p-)`` weights contain
    ``1 + e^{4ah^2} + 2 sin(2 theta) e^{2ah^2}``, which is what the
    expansion in ``(p1, p2)`` reduces to.  The result is signed and is not
    a normalised density.
    """
    a, h = params.a, params.h
    s, c = params.sin2t, params.cos2t
    e2 = params.overlap  # e^{-2ah^2}
    e4 = math.exp(-4 * params.ah2)
    pp = np.asarray(p_plus, dtype=float)
    pm = np.asarray(p_minus, dtype=float)
    # C_theta * e^{-4ah^2}
    scale = 8 * math.pi * a * params.cosh_shift**2
    g = np.exp(-(pp**2 + pm**2) / (4 * a)) / scale
    x = e4 + 1.0 + 2 * s * e2
    plus_w = 0.5 * (e4 + c * c + c * x)
    minus_w = 0.5 * (e4 + c * c - c * x)
    return g * (
        1.0 + c * c * e4
        + 2 * s * s * e2 * np.cos(h * pp) * np.cos(h * pm)
        + plus_w * np.cos(2 * h * pp)
        + minus_w * np.cos(2 * h * pm)
    )


def corrected_joint_definition(params: ThetaParams, p1, p2, correction_power: int = 2):
    """``f12 - f1 f2 + (B_theta/B_0)^k f1^{(0)} f2^{(0)}`` evaluated term by term.

    ``correction_power=2`` gives the added term the same normalisation as
    the subtracted product and reproduces :func:`corrected_joint`.
    """
    zero = params.with_theta(0.0)
    ratio = (params.b_theta / zero.b_theta) ** correction_power
    return (
        joint_momentum_density_theta(params, p1, p2)
        - momentum_density_theta(params, p1) * momentum_density_theta(params, p2)
        + ratio * momentum_density_theta(zero, p1) * momentum_density_theta(zero, p2)
    )


def corrected_joint_bar(params: ThetaParams, p1, p2):
    """``F-bar``: correction term taken at its own (theta = 0) normalisation."""
    return corrected_joint_definition(params, p1, p2, correction_power=0)


def momentum_density_asym(params: AsymParams, p1):
    """Alice's momentum density for the asymmetric state."""
    return _fringe_density(
        p1, params.a, params.h1, math.pi * params.g, 1.0, math.exp(-2 * params.bob_exponent)
    )


def joint_momentum_density_asym(params: AsymParams, p1, p2):
    """``|psi(p1, p2)|^2`` for the asymmetric state, in closed form."""
    a, b, h1, h2 = params.a, params.b, params.h1, params.h2
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    amp = params.m / math.sqrt(a * b) * np.exp(-p1**2 / (4 * a) - p2**2 / (4 * b))
    return (amp * np.cos(h1 * p1 + h2 * p2)) ** 2
