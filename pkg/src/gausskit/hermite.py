"""Hermite polynomials/functions and expansions in derivatives of exp(-x^2).

A target ``f`` is expanded as ``sum_n b_n d^n/dx^n exp(-x^2)``.  Internally
the coefficients are carried in normalised form

    c_n = integral f(x) Hn(x) dx,   Hn = H_n / sqrt(n! 2^n sqrt(pi)),

so that ``f(x) ~ exp(-x^2/2) sum_n c_n h_n(x)`` and nothing overflows for
orders up to a few hundred.  ``b_n = (-1)^n c_n / sqrt(n! 2^n sqrt(pi))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParameter
from .numerics.quadrature import DEFAULT_CONFIG, as_vectorized, integrate

_PI_QUARTER = math.pi ** -0.25


def log_norm(n):
    """``log(n! 2^n sqrt(pi))``, the squared norm of H_n under exp(-x^2)."""
    return math.lgamma(n + 1) + n * math.log(2.0) + 0.5 * math.log(math.pi)


def hermite_poly(n, x):
    """Physicists' Hermite polynomial via ``H_{k+1} = 2x H_k - 2k H_{k-1}``."""
    if n < 0:
        raise InvalidParameter("Hermite order must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev[()]
    cur = 2.0 * x
    for k in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return cur[()]


def _normalized_table(N, x, h0):
    x = np.asarray(x, dtype=float)
    out = np.empty((N + 1,) + x.shape)
    out[0] = h0
    if N >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, N):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def hermite_functions(N, x):
    """Rows ``h_0(x) .. h_N(x)`` of the orthonormal Hermite functions."""
    x = np.asarray(x, dtype=float)
    return _normalized_table(N, x, _PI_QUARTER * np.exp(-0.5 * x * x))


def normalized_hermite(N, x):
    """Rows ``H_n(x) / sqrt(n! 2^n sqrt(pi))`` for n = 0..N."""
    x = np.asarray(x, dtype=float)
    return _normalized_table(N, x, np.full(x.shape, _PI_QUARTER))


def hermite_function(n, x):
    if n < 0:
        raise InvalidParameter("Hermite order must be non-negative")
    return hermite_functions(n, x)[n][()]


def gaussian_derivative(n, x):
    """``d^n/dx^n exp(-x^2) = (-1)^n H_n(x) exp(-x^2)``."""
    if n < 0:
        raise InvalidParameter("derivative order must be non-negative")
    x = np.asarray(x, dtype=float)
    h = hermite_functions(n, x)[n]
    val = (-1) ** n * math.exp(0.5 * log_norm(n)) * h * np.exp(-0.5 * x * x)
    return val[()]


@dataclass(frozen=True)
class HermiteCoefficients:
    """Expansion weights ``b`` (and normalised ``c``) of one target function.

    ``truncation_M`` is the half-width of the window the target was cut to
    before expanding, or ``None`` when no truncation was needed.
    """

    b: np.ndarray
    c: np.ndarray
    truncation_M: Optional[float]
    N: int

    @classmethod
    def from_b(cls, b, truncation_M=None):
        b = np.asarray(b, dtype=float)
        n = np.arange(len(b))
        scale = np.exp(0.5 * np.array([log_norm(k) for k in n]))
        c = (-1.0) ** n * b * scale
        return cls(b, c, truncation_M, len(b) - 1)

    @classmethod
    def from_c(cls, c, truncation_M=None):
        c = np.asarray(c, dtype=float)
        n = np.arange(len(c))
        scale = np.exp(-0.5 * np.array([log_norm(k) for k in n]))
        b = (-1.0) ** n * c * scale
        return cls(b, c, truncation_M, len(c) - 1)

    def __len__(self):
        return self.N + 1


def _tail_norm_sq(f, M, cfg):
    fun = as_vectorized(f)
    T = cfg.tail_cutoff
    if M >= T:
        return 0.0
    sq = lambda x: np.abs(fun(x)) ** 2  # noqa: E731
    return float(integrate(sq, (M, T), cfg)) + float(integrate(sq, (-T, -M), cfg))


def choose_truncation(f, cfg=DEFAULT_CONFIG):
    """Smallest power-of-two ``M`` with ``||f - f chi_[-M,M]||_2 < abs_tol``."""
    M = 1.0
    while M < cfg.tail_cutoff:
        if math.sqrt(_tail_norm_sq(f, M, cfg)) < cfg.abs_tol:
            return M
        M *= 2.0
    return cfg.tail_cutoff


def compute_bn(f, N, cfg=DEFAULT_CONFIG, M=None):
    """Coefficients ``b_0..b_N`` of ``f`` (a TargetFunction or callable).

    When ``f exp(x^2/2)`` is square integrable (bounded support, or Gaussian
    decay faster than exp(-x^2/2)) no truncation is applied.  Otherwise ``f``
    is cut to ``[-M, M]`` first; ``M`` defaults to the smallest power of two
    whose discarded tail has L2 norm below ``cfg.abs_tol``.
    """
    if N < 0:
        raise InvalidParameter("N must be non-negative")
    fun = as_vectorized(f)
    support = getattr(f, "support", (-math.inf, math.inf))
    bps = list(getattr(f, "breakpoints", ()))
    integrable = bool(getattr(f, "hermite_integrable", False))
    bounded = math.isfinite(support[0]) and math.isfinite(support[1])

    if M is not None:
        if not M > 0:
            raise InvalidParameter("truncation half-width M must be positive")
        trunc = float(M)
    elif bounded or integrable:
        trunc = None
    else:
        trunc = choose_truncation(f, cfg)

    lo, hi = support
    if trunc is not None:
        lo, hi = max(lo, -trunc), min(hi, trunc)
        bps += [-trunc, trunc]
    if not lo < hi:
        return HermiteCoefficients.from_c(np.zeros(N + 1), trunc)

    def integrand(x):
        fx = np.asarray(fun(x))
        table = normalized_hermite(N, x)
        # zero rows of f must stay zero even where Hn is huge
        prod = np.where(fx[None, :] == 0, 0.0, fx[None, :] * table)
        return prod.T

    domain = (lo, hi) if (math.isfinite(lo) or math.isfinite(hi)) else "whole-line"
    c = integrate(integrand, domain, cfg, [p for p in bps if lo < p < hi])
    c = np.atleast_1d(np.real_if_close(c))
    if np.iscomplexobj(c):
        raise InvalidParameter("compute_bn expects a real-valued target")
    return HermiteCoefficients.from_c(c, trunc)


def eval_hermite_expansion(b, x):
    """Partial sum ``sum_n b_n d^n/dx^n exp(-x^2)`` at ``x``."""
    if not isinstance(b, HermiteCoefficients):
        b = HermiteCoefficients.from_b(b)
    x = np.asarray(x, dtype=float)
    table = hermite_functions(b.N, x)
    val = np.tensordot(b.c, table, axes=(0, 0)) * np.exp(-0.5 * x * x)
    return val[()]


def expansion_function(b):
    """The partial sum as a TargetFunction (Gaussian decay, whole line)."""
    from .funcspec import TargetFunction

    return TargetFunction.from_callable(lambda x: eval_hermite_expansion(b, x), decay_rate=1.0)
