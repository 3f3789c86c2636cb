"""Entangled Gaussian double-double-slit model: densities, Wigner functions,
visibility/predictability measures and their numerical cross-checks."""

from .states import AsymParams, ThetaParams

__version__ = "0.1.0"

__all__ = ["AsymParams", "ThetaParams", "__version__"]
