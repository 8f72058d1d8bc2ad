"""Quadrature, norms and extended-precision dense solves shared by all modules."""

from .linalg import (
    big,
    condition_estimate,
    context,
    inverse,
    residual_inf_norm,
    solve_dense,
    solve_exact,
)
from .quadrature import (
    DEFAULT_CONFIG,
    WHOLE_LINE,
    QuadratureConfig,
    as_vectorized,
    integrate,
    l2_norm,
    weighted_l2_norm,
)

__all__ = [
    "DEFAULT_CONFIG",
    "WHOLE_LINE",
    "QuadratureConfig",
    "as_vectorized",
    "big",
    "condition_estimate",
    "context",
    "integrate",
    "inverse",
    "l2_norm",
    "residual_inf_norm",
    "solve_dense",
    "solve_exact",
    "weighted_l2_norm",
]
