"""Approximation of functions by finite sums of Gaussian translates.

Submodules: ``numerics`` (quadrature, extended-precision linear algebra),
``funcspec`` (target-function expressions), ``hermite``, ``stencil``,
``gaussfit``, ``lsq``, ``lowfreq`` and ``cli``.
"""

from .errors import GaussKitError, InputError, NumericalError
from .funcspec import TargetFunction, catalog, parse
from .gaussfit import GaussianCombination, bn_to_an, eval_combo, fit, impulse_synthesis, l2_fit_error
from .hermite import compute_bn, eval_hermite_expansion
from .lowfreq import TrigCombination, fit_lowfreq, weighted_fit_error
from .lsq import build_normal_system, solve_least_squares

__version__ = "0.1.0"

__all__ = [
    "GaussKitError", "InputError", "NumericalError", "TargetFunction", "catalog", "parse",
    "GaussianCombination", "bn_to_an", "eval_combo", "fit", "impulse_synthesis", "l2_fit_error",
    "compute_bn", "eval_hermite_expansion", "TrigCombination", "fit_lowfreq",
    "weighted_fit_error", "build_normal_system", "solve_least_squares",
]
