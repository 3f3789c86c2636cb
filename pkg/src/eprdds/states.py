"""Two-particle Gaussian double-slit states.

Two families are supported:

* :class:`ThetaParams` -- the symmetric family ``psi_theta`` where ``theta``
  in ``[0, pi/4]`` dials the entanglement from maximal (``theta = 0``) to a
  product state (``theta = pi/4``).
* :class:`AsymParams` -- the maximally entangled asymmetric state where
  Bob's slits and Gaussian width differ from Alice's.

Units are natural (hbar = 1): ``a`` and ``b`` are inverse squared lengths,
``h`` is a length and momenta are inverse lengths.  Fourier transforms use
the kernel ``exp(-i p x) / sqrt(2 pi)`` per particle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ThetaParams",
    "AsymParams",
    "psi_theta_position",
    "psi_theta_momentum",
    "psi_asym_position",
    "psi_asym_momentum",
    "swap_particles",
]

THETA_MAX = math.pi / 4


@dataclass(frozen=True)
class ThetaParams:
    """Parameters ``(a, h, theta)`` of the symmetric double-double-slit state."""

    a: float
    h: float
    theta: float

    def __post_init__(self):
        a, h, theta = float(self.a), float(self.h), float(self.theta)
        if not (math.isfinite(a) and a > 0):
            raise ValueError(f"a must be positive and finite, got {self.a!r}")
        if not (math.isfinite(h) and h >= 0):
            raise ValueError(f"h must be non-negative and finite, got {self.h!r}")
        # a couple of ulps of slack so that e.g. atan(1) or pi/4 computed
        # some other way is not rejected
        if not (-1e-15 <= theta <= THETA_MAX * (1 + 4e-16)):
            raise ValueError(f"theta must lie in [0, pi/4], got {self.theta!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "theta", min(max(theta, 0.0), THETA_MAX))

    @property
    def ah2(self) -> float:
        return self.a * self.h * self.h

    @property
    def sin2t(self) -> float:
        return math.sin(2 * self.theta)

    @property
    def cos2t(self) -> float:
        return math.cos(2 * self.theta)

    @property
    def overlap(self) -> float:
        """``exp(-2 a h^2)``: overlap factor between the two slit Gaussians."""
        return math.exp(-2 * self.ah2)

    @property
    def norm_sum(self) -> float:
        """``1 + 2 sin(2 theta) e^{-2ah^2} + e^{-4ah^2}``."""
        return 1.0 + 2 * self.sin2t * self.overlap + math.exp(-4 * self.ah2)

    @property
    def a_theta(self) -> float:
        """Normalisation ``A_theta`` of ``psi_theta``."""
        return math.sqrt(self.a / (math.pi * self.norm_sum))

    @property
    def a_sym(self) -> float:
        """Normalisation ``A`` of the untwisted state with ``h1 = h2 = h``."""
        return math.sqrt(self.a / (math.pi * (1.0 + math.exp(-4 * self.ah2))))

    @property
    def b_theta(self) -> float:
        """``B_theta = A_theta^2 / (2 pi a)``."""
        return 1.0 / (2 * math.pi**2 * self.norm_sum)

    @property
    def cosh_shift(self) -> float:
        """``(cosh(2ah^2) + sin 2theta) e^{-2ah^2}``, finite for any ``ah^2``."""
        e = self.overlap
        return 0.5 * (1.0 + math.exp(-4 * self.ah2)) + self.sin2t * e

    @property
    def log_c_theta(self) -> float:
        """``log C_theta`` with ``C_theta = 8 pi a [cosh(2ah^2) + sin 2theta]^2``."""
        return math.log(8 * math.pi * self.a) + 4 * self.ah2 + 2 * math.log(self.cosh_shift)

    @property
    def c_theta(self) -> float:
        """``C_theta``; overflows to ``inf`` for ``ah^2`` beyond ~175."""
        try:
            return math.exp(self.log_c_theta)
        except OverflowError:
            return math.inf

    @property
    def n_theta(self) -> float:
        """``N_theta = 1 / C_theta``; underflows to 0 rather than raising."""
        return math.exp(-self.log_c_theta)

    def with_theta(self, theta: float) -> "ThetaParams":
        return ThetaParams(self.a, self.h, theta)


@dataclass(frozen=True)
class AsymParams:
    """Parameters ``(a, h1, b, h2)`` of the asymmetric entangled state."""

    a: float
    h1: float
    b: float
    h2: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)
        for name in ("h1", "h2"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be non-negative and finite, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def alice_exponent(self) -> float:
        """``a h1^2``."""
        return self.a * self.h1 * self.h1

    @property
    def bob_exponent(self) -> float:
        """``b h2^2``."""
        return self.b * self.h2 * self.h2

    @property
    def m_squared(self) -> float:
        """``M^2 = (sqrt(ab)/pi) / (1 + exp(-2(a h1^2 + b h2^2)))``."""
        total = self.alice_exponent + self.bob_exponent
        return math.sqrt(self.a * self.b) / (math.pi * (1.0 + math.exp(-2 * total)))

    @property
    def m(self) -> float:
        return math.sqrt(self.m_squared)

    @property
    def g(self) -> float:
        """``G = M^2 / (2 pi sqrt(ab))``."""
        total = self.alice_exponent + self.bob_exponent
        return 1.0 / (2 * math.pi**2 * (1.0 + math.exp(-2 * total)))

    @property
    def is_symmetric(self) -> bool:
        return self.a == self.b and self.h1 == self.h2

    def swapped(self) -> "AsymParams":
        return AsymParams(self.b, self.h2, self.a, self.h1)


def swap_particles(params: AsymParams) -> AsymParams:
    """Exchange the roles of Alice and Bob."""
    return params.swapped()


def _gauss(x, a, centre):
    return np.exp(-a * (x - centre) ** 2)


def psi_theta_position(params: ThetaParams, x1, x2):
    """Position wavefunction ``psi_theta(x1, x2)`` (real)."""
    a, h = params.a, params.h
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    l1, r1 = _gauss(x1, a, h), _gauss(x1, a, -h)
    l2, r2 = _gauss(x2, a, h), _gauss(x2, a, -h)
    c, s = math.cos(params.theta), math.sin(params.theta)
    return params.a_theta * (c * (l1 * l2 + r1 * r2) + s * (l1 * r2 + r1 * l2))


def psi_theta_momentum(params: ThetaParams, p1, p2):
    """Momentum wavefunction of ``psi_theta`` (complex array)."""
    a, h = params.a, params.h
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    env = np.exp(-(p1**2 + p2**2) / (4 * a)) / (2 * a)
    c, s = math.cos(params.theta), math.sin(params.theta)
    # slit at +h contributes exp(-i p h), slit at -h contributes exp(+i p h)
    same = 2 * np.cos(h * (p1 + p2))
    opposite = 2 * np.cos(h * (p1 - p2))
    return (params.a_theta * env * (c * same + s * opposite)).astype(complex)


def psi_asym_position(params: AsymParams, x1, x2):
    """Position wavefunction of the asymmetric state (real)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    a, b, h1, h2 = params.a, params.b, params.h1, params.h2
    return params.m * (
        _gauss(x1, a, h1) * _gauss(x2, b, h2) + _gauss(x1, a, -h1) * _gauss(x2, b, -h2)
    )


def psi_asym_momentum(params: AsymParams, p1, p2):
    """Momentum wavefunction of the asymmetric state as a complex array.

    The two terms are complex conjugates, so the imaginary part is zero up
    to rounding; it is kept complex so callers can treat both families and
    numerical transforms uniformly.
    """
    a, b, h1, h2 = params.a, params.b, params.h1, params.h2
    p1 = np.asarray(p1, dtype=complex)
    p2 = np.asarray(p2, dtype=complex)
    pref = params.m / (2 * math.sqrt(a * b))
    t_plus = np.exp(-((p1 + 2j * a * h1) ** 2) / (4 * a) - a * h1**2
                    - ((p2 + 2j * b * h2) ** 2) / (4 * b) - b * h2**2)
    t_minus = np.exp(-((p1 - 2j * a * h1) ** 2) / (4 * a) - a * h1**2
                     - ((p2 - 2j * b * h2) ** 2) / (4 * b) - b * h2**2)
    return pref * (t_plus + t_minus)
