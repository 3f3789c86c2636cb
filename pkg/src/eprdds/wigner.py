"""Closed-form Wigner functions, full and partial, for both state families.

Convention: ``W(x, p) = (1/pi)^n Int psi*(x + y) psi(x - y) exp(2 i p.y) dy``
with ``hbar = 1``, so every Wigner function integrates to one over phase
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import AsymParams, ThetaParams

__all__ = [
    "PhasePoint",
    "GaussFactors",
    "gauss_factors",
    "wigner_theta",
    "wigner_partial_theta",
    "wigner_partial_theta_particle2",
    "wigner_asym",
    "wigner_partial_asym",
    "wigner_partial_asym_particle2",
]


@dataclass(frozen=True)
class PhasePoint:
    x1: float
    x2: float
    p1: float
    p2: float


@dataclass(frozen=True)
class GaussFactors:
    """Per-particle Gaussian factors.

    ``g_minus`` is centred on the slit at ``+h`` and ``g_plus`` on ``-h``
    (the sign names the shift inside ``(x +- h)^2``); ``g_zero`` sits at
    the midpoint and carries the interference term.
    """

    g_minus: np.ndarray
    g_plus: np.ndarray
    g_zero: np.ndarray


def gauss_factors(x, p, width, h) -> GaussFactors:
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    mom = np.exp(-p * p / (2 * width))
    return GaussFactors(
        g_minus=np.exp(-2 * width * (x - h) ** 2) * mom,
        g_plus=np.exp(-2 * width * (x + h) ** 2) * mom,
        g_zero=np.exp(-2 * width * x * x) * mom,
    )


def _unpack(pt):
    if isinstance(pt, PhasePoint):
        return pt.x1, pt.x2, pt.p1, pt.p2
    return pt


def wigner_theta(params: ThetaParams, pt):
    """Full two-particle Wigner function of ``psi_theta``.

    ``pt`` is a :class:`PhasePoint` or any ``(x1, x2, p1, p2)`` tuple of
    broadcastable arrays.
    """
    x1, x2, p1, p2 = _unpack(pt)
    a, h, th = params.a, params.h, params.theta
    f1 = gauss_factors(x1, p1, a, h)
    f2 = gauss_factors(x2, p2, a, h)
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    zz = f1.g_zero * f2.g_zero
    same = f1.g_minus * f2.g_minus + f1.g_plus * f2.g_plus + 2 * zz * np.cos(2 * h * (p1 + p2))
    mixed = (
        np.cos(2 * h * p1) * f1.g_zero * (f2.g_minus + f2.g_plus)
        + np.cos(2 * h * p2) * f2.g_zero * (f1.g_minus + f1.g_plus)
    )
    opposite = f1.g_minus * f2.g_plus + f1.g_plus * f2.g_minus + 2 * zz * np.cos(2 * h * (p1 - p2))
    return params.b_theta * (
        math.cos(th) ** 2 * same + params.sin2t * mixed + math.sin(th) ** 2 * opposite
    )


def wigner_partial_theta(params: ThetaParams, x1, p1):
    """Alice's reduced Wigner function ``W_{1,theta}(x1, p1)``."""
    h, s, e = params.h, params.sin2t, params.overlap
    f = gauss_factors(x1, p1, params.a, h)
    pib = math.pi * params.b_theta
    return pib * (1.0 + e * s) * (f.g_minus + f.g_plus) + 2 * pib * (e + s) * f.g_zero * np.cos(
        2 * h * np.asarray(p1, dtype=float)
    )


def wigner_partial_theta_particle2(params: ThetaParams, x2, p2):
    """Bob's reduced Wigner function; ``psi_theta`` is exchange symmetric."""
    return wigner_partial_theta(params, x2, p2)


def wigner_asym(params: AsymParams, pt):
    """Full Wigner function of the asymmetric state."""
    x1, x2, p1, p2 = _unpack(pt)
    f1 = gauss_factors(x1, p1, params.a, params.h1)
    f2 = gauss_factors(x2, p2, params.b, params.h2)
    phase = 2 * params.h1 * np.asarray(p1, dtype=float) + 2 * params.h2 * np.asarray(p2, dtype=float)
    g = params.g
    return g * (f1.g_minus * f2.g_minus + f1.g_plus * f2.g_plus) + 2 * g * f1.g_zero * f2.g_zero * np.cos(phase)


def wigner_partial_asym(params: AsymParams, x1, p1):
    """Alice's reduced Wigner function for the asymmetric state."""
    f = gauss_factors(x1, p1, params.a, params.h1)
    vis = math.exp(-2 * params.bob_exponent)
    return math.pi * params.g * (
        f.g_minus + f.g_plus + 2 * vis * f.g_zero * np.cos(2 * params.h1 * np.asarray(p1, dtype=float))
    )


def wigner_partial_asym_particle2(params: AsymParams, x2, p2):
    """Bob's reduced Wigner function, via the particle-swap adapter."""
    return wigner_partial_asym(params.swapped(), x2, p2)
