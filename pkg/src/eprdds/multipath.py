"""n-path distinguishability, predictability, coherence and fringe visibility."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvariantViolation",
    "UndefinedContrast",
    "PathEnsemble",
    "normalize_amplitudes",
    "distinguishability",
    "predictability_n",
    "coherence",
    "fringe_visibility",
    "born_extrema",
]

NORM_TOL = 1e-12
RADICAND_TOL = 1e-12


class InvariantViolation(ArithmeticError):
    pass


class UndefinedContrast(ValueError):
    pass


@dataclass(frozen=True)
class PathEnsemble:
    """Path amplitude moduli ``|psi_i|`` and detector overlaps ``|<d_i|d_j>|``.

    Amplitudes must already be normalised (``sum |psi_i|^2 == 1``); use
    :func:`normalize_amplitudes` to rescale raw weights explicitly.  When
    ``overlaps`` is omitted the paths carry no detectors (all overlaps 1).
    """

    amplitudes: np.ndarray
    overlaps: np.ndarray = field(default=None)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=float)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("need a 1-d array of at least two path amplitudes")
        if not np.all(np.isfinite(amps)) or np.any(amps < 0):
            raise ValueError("amplitude moduli must be finite and non-negative")
        total = float(np.sum(amps**2))
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"sum of |psi_i|^2 is {total!r}, expected 1")
        n = amps.size
        if self.overlaps is None:
            ov = np.ones((n, n))
        else:
            ov = np.asarray(self.overlaps, dtype=float)
        if ov.shape != (n, n):
            raise ValueError(f"overlaps must be a {n}x{n} matrix, got shape {ov.shape}")
        if not np.all(np.isfinite(ov)):
            raise ValueError("overlaps must be finite")
        if not np.array_equal(ov, ov.T):
            raise ValueError("overlap matrix must be symmetric")
        if not np.all(np.diag(ov) == 1.0):
            raise ValueError("overlap matrix must have a unit diagonal")
        if np.any(ov < 0) or np.any(ov > 1):
            raise ValueError("overlap magnitudes must lie in [0, 1]")
        amps.setflags(write=False)
        ov.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "overlaps", ov)

    @classmethod
    def from_probabilities(cls, probabilities, overlaps=None):
        return cls(np.sqrt(np.asarray(probabilities, dtype=float)), overlaps)

    @property
    def n(self) -> int:
        return self.amplitudes.size


def normalize_amplitudes(amplitudes) -> np.ndarray:
    amps = np.abs(np.asarray(amplitudes, dtype=float))
    norm = math.sqrt(float(np.sum(amps**2)))
    if norm == 0:
        raise ValueError("cannot normalise an all-zero amplitude vector")
    return amps / norm


def _pair_sum(e: PathEnsemble, weights) -> float:
    outer = np.outer(e.amplitudes, e.amplitudes) * weights
    return float((np.sum(outer) - np.trace(outer)) / (e.n - 1))


def _root_of_complement(x: float) -> float:
    radicand = 1.0 - x * x
    if radicand < -RADICAND_TOL:
        raise InvariantViolation(f"1 - x^2 = {radicand!r} is negative beyond rounding")
    return math.sqrt(max(radicand, 0.0))


def coherence(e: PathEnsemble) -> float:
    """``C = (1/(n-1)) sum_{i != j} |psi_i||psi_j||<d_i|d_j>|``."""
    return _pair_sum(e, e.overlaps)


def distinguishability(e: PathEnsemble) -> float:
    return _root_of_complement(coherence(e))


def predictability_n(e: PathEnsemble) -> float:
    """Detector-free path predictability; for two paths ``||psi_1|^2 - |psi_2|^2|``."""
    return _root_of_complement(_pair_sum(e, 1.0))


def fringe_visibility(i_max: float, i_min: float) -> float:
    if i_max < i_min or i_min < 0:
        raise ValueError(f"need i_max >= i_min >= 0, got ({i_max!r}, {i_min!r})")
    if i_max == 0:
        raise UndefinedContrast("contrast is undefined when both intensities vanish")
    return (i_max - i_min) / (i_max + i_min)


def born_extrema(amp1: float, amp2: float) -> tuple[float, float]:
    """Two-path Born intensities at constructive and destructive phase."""
    return (amp1 + amp2) ** 2, (amp1 - amp2) ** 2
