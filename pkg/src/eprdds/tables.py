"""Plot-ready tables shared by the CLI and the verification suite."""

from __future__ import annotations

import math

import numpy as np

from .densities import (
    joint_momentum_density_asym,
    joint_momentum_density_theta,
    momentum_density_asym,
    momentum_density_theta,
)
from .interferometry import complementarity_scan
from .states import AsymParams, ThetaParams

SCAN_COLUMNS = ("theta", "V_simple", "V_envelope", "P", "sum_sq")


def scan_table(a: float, h: float, points: int = 400) -> np.ndarray:
    recs = complementarity_scan(a, h, points)
    return np.array([[r.theta, r.v_simple, r.v_envelope, r.p, r.sum_sq] for r in recs])


def family_meta(params) -> dict:
    if isinstance(params, ThetaParams):
        return {"family": "theta", "a": params.a, "h": params.h, "theta": params.theta}
    return {"family": "asym", "a": params.a, "h1": params.h1, "b": params.b, "h2": params.h2}


def momentum_grid(params, grid_points: int, range_sigmas: float) -> np.ndarray:
    half = range_sigmas * math.sqrt(params.a)
    return np.linspace(-half, half, grid_points)


def density_table(params, grid_points: int = 801, range_sigmas: float = 6.0,
                  joint: bool = False) -> tuple[tuple[str, ...], np.ndarray]:
    """``(p1, density)`` or, with ``joint``, ``(p1, p2, density)`` rows."""
    p = momentum_grid(params, grid_points, range_sigmas)
    theta = isinstance(params, ThetaParams)
    if not joint:
        f = momentum_density_theta(params, p) if theta else momentum_density_asym(params, p)
        return ("p1", "density"), np.column_stack([p, f])
    if theta:
        p2 = p
    else:
        p2 = np.linspace(-range_sigmas * math.sqrt(params.b), range_sigmas * math.sqrt(params.b),
                         grid_points)
    u, v = np.meshgrid(p, p2, indexing="ij")
    f = joint_momentum_density_theta(params, u, v) if theta else joint_momentum_density_asym(params, u, v)
    return ("p1", "p2", "density"), np.column_stack([u.ravel(), v.ravel(), f.ravel()])


def as_params(a, h=None, theta=None, h1=None, b=None, h2=None):
    """Build exactly one state family from CLI-style keyword values."""
    theta_set = h is not None or theta is not None
    asym_set = h1 is not None or b is not None or h2 is not None
    if theta_set and asym_set:
        raise ValueError("give either --h/--theta or --h1/--b/--h2, not both")
    if a is None:
        raise ValueError("--a is required")
    if asym_set:
        if None in (h1, b, h2):
            raise ValueError("the asymmetric family needs --h1, --b and --h2")
        return AsymParams(a, h1, b, h2)
    if None in (h, theta):
        raise ValueError("the theta family needs --h and --theta")
    return ThetaParams(a, h, theta)
