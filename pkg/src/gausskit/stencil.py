"""Finite-difference stencils from the moment (Vandermonde-type) system.

For nodes ``k_0..k_n`` and derivative order ``k`` the coefficients solve

    sum_i c_i k_i^j / j! = delta_{jk},   j = 0..n,

so that ``g^(k)(x) ~ t^-k sum_i c_i g(x + k_i t)`` with truncation error
``O(t^(n+1-k))``.  Rational nodes are solved exactly with Fractions;
anything else (complex nodes, irrational reals) in extended precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import DuplicateNodes, InvalidParameter, OrderTooHigh, ZeroStep
from .hermite import gaussian_derivative
from .numerics.linalg import context, solve_dense, solve_exact
from .numerics.quadrature import DEFAULT_CONFIG, integrate

DEFAULT_DIGITS = 40


@dataclass(frozen=True)
class Stencil:
    deriv_order: int
    nodes: tuple
    coeffs: tuple

    @property
    def n(self):
        return len(self.nodes) - 1

    @property
    def order_of_accuracy(self):
        return self.n + 1 - self.deriv_order

    @property
    def is_complex(self):
        return any(isinstance(v, complex) or getattr(v, "imag", 0) != 0 for v in self.nodes)

    def coeffs_as(self, kind=complex):
        if kind is float:
            return np.array([float(_real(c)) for c in self.coeffs])
        return np.array([complex(c) for c in self.coeffs])

    def nodes_as(self, kind=complex):
        if kind is float:
            return np.array([float(_real(c)) for c in self.nodes])
        return np.array([complex(c) for c in self.nodes])

    def error_constant(self):
        """``sum_i |c_i| |k_i|^(n+1) / (n+1)!``."""
        n = self.n
        total = sum(abs(complex(c)) * abs(complex(k)) ** (n + 1)
                    for c, k in zip(self.coeffs, self.nodes))
        return total / math.factorial(n + 1)


def _real(v):
    return v.real if hasattr(v, "real") else v


def _as_exact(v):
    if isinstance(v, Rational):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    if isinstance(v, complex) and v.imag == 0:
        return Fraction(v.real)
    return None


def moment_matrix(nodes, field=Fraction):
    n = len(nodes) - 1
    return [[field(k) ** j / math.factorial(j) for k in nodes] for j in range(n + 1)]


def _check_nodes(nodes):
    for i in range(len(nodes)):
        for j in range(i):
            if nodes[i] == nodes[j]:
                raise DuplicateNodes(f"nodes {j} and {i} coincide ({nodes[i]})")


def solve_stencil(deriv_order, nodes, digits=DEFAULT_DIGITS):
    """Coefficients for the ``deriv_order``-th derivative on ``nodes``."""
    nodes = tuple(nodes)
    n = len(nodes) - 1
    if deriv_order < 0:
        raise InvalidParameter("derivative order must be non-negative")
    if n < 0:
        raise InvalidParameter("at least one node is required")
    if deriv_order > n:
        raise OrderTooHigh(f"order {deriv_order} needs at least {deriv_order + 1} nodes, got {n + 1}")
    exact = [_as_exact(v) for v in nodes]
    rhs_len = n + 1
    if all(v is not None for v in exact):
        _check_nodes(exact)
        A = moment_matrix(exact)
        rhs = [Fraction(int(j == deriv_order)) for j in range(rhs_len)]
        coeffs = tuple(solve_exact(A, rhs))
        return Stencil(deriv_order, tuple(exact), coeffs)

    # Ill-conditioned in general, so work at twice the requested digits.
    ctx = context(2 * digits)
    mp_nodes = tuple(ctx.mpmathify(v) for v in nodes)
    _check_nodes(mp_nodes)
    A = [[k ** j / ctx.factorial(j) for k in mp_nodes] for j in range(n + 1)]
    rhs = [ctx.mpf(int(j == deriv_order)) for j in range(rhs_len)]
    coeffs = tuple(solve_dense(A, rhs, 2 * digits))
    return Stencil(deriv_order, mp_nodes, coeffs)


def backward_difference_stencil(n):
    """Nodes ``0, -1, .., -n`` with weights ``(-1)^i binom(n, i)``."""
    if n < 0:
        raise InvalidParameter("order must be non-negative")
    nodes = tuple(Fraction(-i) for i in range(n + 1))
    coeffs = tuple(Fraction((-1) ** i * math.comb(n, i)) for i in range(n + 1))
    return Stencil(n, nodes, coeffs)


def apply_stencil(s, g, x, t):
    """``t^-k sum_i c_i g(x + k_i t)``."""
    if t == 0:
        raise ZeroStep("step t must be nonzero")
    if s.is_complex:
        pts = x + s.nodes_as(complex) * t
        vals = np.array([g(p) for p in pts], dtype=complex)
        return complex(np.dot(s.coeffs_as(complex), vals) / t ** s.deriv_order)
    pts = x + s.nodes_as(float) * t
    vals = np.array([g(p) for p in pts])
    terms = s.coeffs_as(float) * vals
    return math.fsum(terms) / t ** s.deriv_order


def truncation_error_bound(s, max_deriv, t):
    """Bound on ``|g^(k)(x) - apply_stencil(s, g, x, t)|`` given
    ``|g^(n+1)| <= max_deriv`` on the span of the nodes."""
    if t == 0:
        raise ZeroStep("step t must be nonzero")
    if max_deriv < 0:
        raise InvalidParameter("max_deriv must be non-negative")
    return abs(t) ** s.order_of_accuracy * max_deriv * s.error_constant()


def gaussian_derivative_bound(order, tail_cutoff=30.0, spacing=1e-3):
    """Grid maximum of ``|d^order/dx^order exp(-x^2)|`` times 1.05."""
    xs = np.arange(-tail_cutoff, tail_cutoff + spacing / 2, spacing)
    return 1.05 * float(np.max(np.abs(gaussian_derivative(order, xs))))


def vandermonde_det(nodes):
    """Determinant of the moment matrix:
    ``prod_{i<j} (k_j - k_i) / prod_{2<=i<=n} i!``."""
    nodes = list(nodes)
    exact = [_as_exact(v) for v in nodes]
    vals = exact if all(v is not None for v in exact) else [complex(v) for v in nodes]
    num = Fraction(1) if vals is exact else 1.0
    for j in range(len(vals)):
        for i in range(j):
            num *= vals[j] - vals[i]
    den = 1
    for i in range(2, len(vals)):
        den *= math.factorial(i)
    return num / den


def divided_difference_l2_error(n, t, p=2.0, cfg=DEFAULT_CONFIG):
    """L^p distance between ``d^n/dx^n exp(-x^2)`` and its backward
    divided difference with step ``t``."""
    from .gaussfit import GaussianCombination, eval_combo

    if t == 0:
        raise ZeroStep("step t must be nonzero")
    if not p > 0:
        raise InvalidParameter("p must be positive")
    if n < 0:
        raise InvalidParameter("n must be non-negative")
    if n == 0:
        return 0.0
    s = backward_difference_stencil(n)
    combo = GaussianCombination.from_exact(t, [c / Fraction(t) ** n for c in s.coeffs])

    def integrand(x):
        return np.abs(gaussian_derivative(n, x) - eval_combo(combo, x)) ** p

    T = cfg.tail_cutoff
    lo, hi = min(-T, n * t - T), max(T, n * t + T)
    return float(integrate(integrand, (lo, hi), cfg)) ** (1.0 / p)
