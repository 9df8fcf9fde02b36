"""Moments of contraction of quantum channels: estimators, bounds and noisy circuits."""

from __future__ import annotations

__version__ = "0.1.0"

from . import bounds, channels, circuits, divergences, ensembles, estimator, linalg
from .channels import KrausChannel, ProductChannelSpec, choi_functionals
from .ensembles import SeedSpec
from .errors import (
    ConfigError,
    ContractioError,
    DomainError,
    EmptyEstimateError,
    InvalidShapeError,
    QuadratureError,
)
from .estimator import MomentEstimate, MomentRequest, estimate_moments

__all__ = [
    "__version__",
    "bounds",
    "channels",
    "circuits",
    "divergences",
    "ensembles",
    "estimator",
    "linalg",
    "KrausChannel",
    "ProductChannelSpec",
    "choi_functionals",
    "SeedSpec",
    "MomentRequest",
    "MomentEstimate",
    "estimate_moments",
    "ContractioError",
    "ConfigError",
    "DomainError",
    "EmptyEstimateError",
    "InvalidShapeError",
    "QuadratureError",
]
