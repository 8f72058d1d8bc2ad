"""Continuous least-squares weights for Gaussian translates.

Minimising ``E2(a) = integral |f - sum_n a_n exp(-(x - n t)^2)|^2`` leads to
the normal equations ``M a = r`` with

    M[j][k] = sqrt(pi/2) exp(-(j - k)^2 t^2 / 2),
    r[j]    = integral f(x) exp(-(x - j t)^2) dx.

For small t the matrix is close to rank one and very badly conditioned, so
everything here runs in extended precision and the condition number is
reported alongside the answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, Singular, ZeroStep
from .gaussfit import GaussianCombination, l2_fit_error
from .numerics.linalg import condition_estimate, context, residual_inf_norm, solve_dense
from .numerics.quadrature import DEFAULT_CONFIG, as_vectorized, integrate

DEFAULT_PRECISION = 50


@dataclass(frozen=True, eq=False)
class NormalSystem:
    M: tuple
    rhs: tuple
    t: float
    N: int
    precision_digits: int
    f_norm_sq: object = None

    @property
    def ctx(self):
        return context(self.precision_digits)


def gram_matrix(N, t, digits):
    ctx = context(digits)
    tt = ctx.mpf(t)
    diag = ctx.sqrt(ctx.pi / 2)
    # entries depend on |j - k| only
    band = [diag * ctx.exp(-(d * tt) ** 2 / 2) for d in range(N + 1)]
    return tuple(tuple(band[abs(j - k)] for k in range(N + 1)) for j in range(N + 1))


def _pieces(f, lo, hi):
    bps = [p for p in getattr(f, "breakpoints", ()) if lo < p < hi]
    return [lo, *bps, hi]


def _mp_integral(f, ctx, center, weight_sq, window):
    """``integral f(x)^p exp(-(x - center)^2)`` over the part of the support
    within ``center +- window``, in the context's precision.  ``weight_sq``
    switches between ``f`` (False) and ``f^2`` without the Gaussian (True)."""
    s_lo, s_hi = f.support
    if weight_sq:
        lo, hi = s_lo, s_hi
        if not math.isfinite(lo):
            lo = -window
        if not math.isfinite(hi):
            hi = window
    else:
        lo = max(s_lo, float(center) - window)
        hi = min(s_hi, float(center) + window)
    if not lo < hi:
        return ctx.zero
    pts = [ctx.mpf(p) for p in _pieces(f, lo, hi)]
    if weight_sq:
        g = lambda x: f.mp_eval(x, ctx) ** 2  # noqa: E731
    else:
        g = lambda x: f.mp_eval(x, ctx) * ctx.exp(-(x - center) ** 2)  # noqa: E731
    return ctx.quad(g, pts)


def build_normal_system(f, N, t, precision=DEFAULT_PRECISION, cfg=DEFAULT_CONFIG):
    """Assemble ``M`` analytically and ``r`` by quadrature.

    Targets given as expressions are integrated in extended precision to
    about ``precision/2`` digits; plain callables fall back to double
    precision adaptive quadrature at ``cfg.abs_tol``.
    """
    if t == 0:
        raise ZeroStep("step t must be nonzero")
    if N < 0:
        raise InvalidParameter("N must be non-negative")
    t = float(t)
    M = gram_matrix(N, t, precision)
    ctx = context(precision)
    if getattr(f, "supports_mp", False):
        qctx = context(max(precision // 2 + 10, 20))
        window = math.sqrt((qctx.dps + 10) * math.log(10.0)) + 1.0
        reach = window
        if not f.bounded:
            if not f.decay_rate or f.decay_rate <= 0:
                raise InvalidParameter("least squares needs a target with Gaussian decay or bounded support")
            reach = window / math.sqrt(2 * min(f.decay_rate, 1.0))
        tt = qctx.mpf(t)
        rhs = tuple(ctx.convert(_mp_integral(f, qctx, j * tt, False, window)) for j in range(N + 1))
        norm_sq = ctx.convert(_mp_integral(f, qctx, 0, True, reach))
    else:
        fun = as_vectorized(f)
        bps = getattr(f, "breakpoints", ())
        vals = integrate(lambda x: np.exp(-(x[:, None] - np.arange(N + 1) * t) ** 2) * np.asarray(fun(x))[:, None],
                         "whole-line", cfg, bps)
        rhs = tuple(ctx.convert(float(v)) for v in np.atleast_1d(vals))
        norm_sq = ctx.convert(float(integrate(lambda x: np.abs(fun(x)) ** 2, "whole-line", cfg, bps)))
    return NormalSystem(M, rhs, t, N, int(precision), norm_sq)


def solve_least_squares(sys):
    """Least-squares weights, with the solve residual and a condition
    estimate recorded in ``info``."""
    try:
        a = solve_dense(sys.M, sys.rhs, sys.precision_digits)
        cond = condition_estimate(sys.M, sys.precision_digits)
    except Singular as exc:
        raise Singular(f"{exc}; increase precision_digits", pivot=exc.pivot) from exc
    res = residual_inf_norm(sys.M, a, sys.rhs, 2 * sys.precision_digits)
    info = {
        "condition_estimate": cond,
        "residual_inf_norm": float(res),
        "rhs_inf_norm": float(max(abs(v) for v in sys.rhs)),
        "precision_digits": sys.precision_digits,
    }
    return GaussianCombination(sys.t, tuple(a), 2 * sys.precision_digits, None, info)


def fit_least_squares(f, N, t, precision=DEFAULT_PRECISION, cfg=DEFAULT_CONFIG):
    return solve_least_squares(build_normal_system(f, N, t, precision, cfg))


def quadratic_form_error(sys, a):
    """``E2(a) = ||f||^2 - 2 a.r + a^T M a`` evaluated in extended precision.

    Only meaningful when the system was built from an expression target
    (so that ``||f||^2`` and ``r`` are accurate to many digits).
    """
    ctx = context(2 * sys.precision_digits)
    a = [ctx.convert(v) for v in a]
    r = [ctx.convert(v) for v in sys.rhs]
    Ma = [ctx.fdot([ctx.convert(m) for m in row], a) for row in sys.M]
    e2 = ctx.convert(sys.f_norm_sq) - 2 * ctx.fdot(a, r) + ctx.fdot(a, Ma)
    return max(e2, ctx.zero)


def least_squares_error(f, c, cfg=DEFAULT_CONFIG):
    """``sqrt(E2)`` for the combination ``c``; same as the generic L2 error."""
    return l2_fit_error(f, c, cfg)


def report(sys, c, e2_error):
    return {
        "N": sys.N,
        "t": sys.t,
        "precision_digits": sys.precision_digits,
        "condition_estimate": c.info.get("condition_estimate"),
        "residual_inf_norm": c.info.get("residual_inf_norm"),
        "coefficients": [float(v) for v in c.values],
        "e2_error": e2_error,
    }
