"""Sums of Gaussian translates: coefficients from Hermite weights, evaluation,
error measurement and the impulse-train view.

A combination ``sum_n a_n exp(-(x - n t)^2)`` built from Hermite weights has
coefficients of size ``|b_n| / t^n`` with alternating signs; the sum itself is
O(1).  The coefficients are therefore kept as extended-precision numbers and
the sum is evaluated in the same precision as

    exp(-x^2) * sum_n (a_n exp(-n^2 t^2)) q^n,   q = exp(2 x t),

by Horner's rule, then rounded once.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .errors import InvalidParameter, ZeroStep
from .hermite import HermiteCoefficients, compute_bn
from .numerics.linalg import context
from .numerics.quadrature import DEFAULT_CONFIG, as_vectorized, integrate

GUARD_DIGITS = 30
MIN_DIGITS = 30


def _digits_for_magnitude(log10_max):
    return max(MIN_DIGITS, int(math.ceil(log10_max)) + GUARD_DIGITS)


@dataclass(frozen=True, eq=False)
class GaussianCombination:
    """``x -> sum_n a[n] exp(-(x - n t)^2)`` with extended-precision ``a``.

    ``a`` holds mpmath numbers (real or complex) from a context working at
    ``digits`` decimal digits.  ``hermite`` keeps the expansion the
    coefficients came from, when there is one; ``info`` carries reporting
    metadata such as the truncation half-width or a condition estimate.
    """

    t: float
    a: tuple
    digits: int
    hermite: Optional[HermiteCoefficients] = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.t == 0:
            raise ZeroStep("step t must be nonzero")
        if not self.a:
            raise InvalidParameter("a combination needs at least one coefficient")
        object.__setattr__(self, "_horner", None)

    @property
    def N(self):
        return len(self.a) - 1

    @property
    def ctx(self):
        return _ctx(self.digits)

    @property
    def is_complex(self):
        return any(isinstance(v, mpmath.mpc) and v.imag != 0 for v in self.a)

    @property
    def shifts(self):
        return np.arange(self.N + 1) * self.t

    @property
    def values(self):
        """Coefficients as doubles (``inf`` where they overflow)."""
        if self.is_complex:
            return np.array([complex(v) for v in self.a])
        return np.array([_to_float(v) for v in self.a])

    @property
    def signs(self):
        return np.array([int(mpmath.sign(_re(v))) for v in self.a])

    @property
    def log10_magnitudes(self):
        ctx = self.ctx
        return np.array([float(ctx.log10(abs(v))) if v != 0 else -math.inf for v in self.a])

    @classmethod
    def from_values(cls, t, a, digits=MIN_DIGITS, **kw):
        ctx = _ctx(digits)
        return cls(float(t), tuple(ctx.convert(_exactish(v)) for v in a), digits, **kw)

    @classmethod
    def from_exact(cls, t, a, digits=None, **kw):
        """Build from exact rationals (Fractions or ints), picking the digits
        from the largest coefficient."""
        mags = [abs(Fraction(v)) for v in a]
        big = max(mags) if mags else 0
        lg = math.log10(big) if big else 0.0
        digits = digits or _digits_for_magnitude(lg)
        ctx = _ctx(digits)
        vals = tuple(ctx.mpf(v.numerator) / v.denominator for v in map(Fraction, a))
        return cls(float(t), vals, digits, **kw)


_CONTEXTS = {}


def _ctx(digits):
    # Contexts are cheap but creating one per call adds up inside quadrature.
    ctx = _CONTEXTS.get(digits)
    if ctx is None:
        ctx = _CONTEXTS[digits] = context(digits)
    return ctx


def _re(v):
    return v.real if isinstance(v, mpmath.mpc) else v


def _to_float(v):
    try:
        return float(v)
    except OverflowError:
        return math.copysign(math.inf, float(mpmath.sign(v)))


def _exactish(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.complexfloating):
        return complex(v)
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return v


def bn_to_an(b, t, digits=None):
    """Gaussian-translate weights from Hermite weights.

    ``a_k = (-1)^k sum_{n >= k} b_n binom(n, k) / t^n``: each Gaussian
    derivative is replaced by its backward divided difference with step t.
    """
    if t == 0:
        raise ZeroStep("step t must be nonzero")
    herm = b if isinstance(b, HermiteCoefficients) else None
    bvec = np.asarray(herm.b if herm is not None else b)
    N = len(bvec) - 1
    if N < 0:
        raise InvalidParameter("need at least one Hermite coefficient")
    t = float(t)
    lt = math.log10(abs(t))
    mags = [math.log10(abs(complex(v))) - n * lt + n * math.log10(2.0)
            for n, v in enumerate(bvec) if v != 0]
    if digits is None:
        digits = _digits_for_magnitude(max(mags, default=0.0))
    ctx = _ctx(digits)
    inv_t = 1 / ctx.mpf(t)
    scaled = [ctx.convert(_exactish(v)) * inv_t ** n for n, v in enumerate(bvec)]
    a = []
    for k in range(N + 1):
        s = ctx.fsum(math.comb(n, k) * scaled[n] for n in range(k, N + 1))
        a.append(-s if k % 2 else s)
    info = {"truncation_M": herm.truncation_M} if herm is not None else {}
    return GaussianCombination(t, tuple(a), digits, herm, info)


def fit(f, N, t, cfg=DEFAULT_CONFIG, M=None, digits=None):
    """Expand ``f`` in Gaussian derivatives up to order N and turn the
    expansion into N+1 Gaussian translates with step t."""
    if t == 0:
        raise ZeroStep("step t must be nonzero")
    if N < 0:
        raise InvalidParameter("N must be non-negative")
    return bn_to_an(compute_bn(f, N, cfg, M), t, digits)


def _horner_coeffs(c):
    if c._horner is None:
        ctx = c.ctx
        tt = ctx.mpf(c.t)
        d = [a * ctx.exp(-(n * tt) ** 2) for n, a in enumerate(c.a)][::-1]
        object.__setattr__(c, "_horner", d)
    return c._horner


def eval_combo(c, x):
    """Value of the combination at ``x`` (scalar or array)."""
    ctx = c.ctx
    d = _horner_coeffs(c)
    two_t = 2 * ctx.mpf(c.t)
    xs = np.asarray(x, dtype=float)
    cplx = any(isinstance(v, mpmath.mpc) for v in c.a)
    out = np.empty(xs.shape, dtype=complex if cplx else float)
    flat = out.reshape(-1)
    for i, xv in enumerate(xs.reshape(-1)):
        xm = ctx.mpf(float(xv))
        q = ctx.exp(two_t * xm)
        acc = d[0]
        for dk in d[1:]:
            acc = acc * q + dk
        val = acc * ctx.exp(-xm * xm)
        flat[i] = complex(val) if cplx else float(val)
    return out[()] if out.ndim == 0 else out


def combo_function(c):
    """The combination wrapped as a vectorised callable."""
    return lambda x: eval_combo(c, x)


def error_domain(f, c, cfg=DEFAULT_CONFIG):
    T = cfg.tail_cutoff
    lo, hi = getattr(f, "support", (-math.inf, math.inf))
    span_lo, span_hi = min(0.0, c.N * c.t), max(0.0, c.N * c.t)
    a = min(span_lo - T, lo) if math.isfinite(lo) else span_lo - T
    b = max(span_hi + T, hi) if math.isfinite(hi) else span_hi + T
    return a, b


def l2_fit_error(f, c, cfg=DEFAULT_CONFIG):
    """``||f - combination||_2`` by adaptive quadrature."""
    fun = as_vectorized(f)
    lo, hi = error_domain(f, c, cfg)
    bps = [p for p in getattr(f, "breakpoints", ()) if lo < p < hi]

    def sq(x):
        return np.abs(fun(x) - eval_combo(c, x)) ** 2

    e2 = float(np.real(integrate(sq, (lo, hi), cfg, bps)))
    return math.sqrt(max(e2, 0.0))


@dataclass(frozen=True, eq=False)
class ImpulseTrain:
    """Weighted Dirac impulses at ``times`` (all before ``load_time``)."""

    times: tuple
    weights: tuple
    load_time: float
    digits: int
    combination: Optional[GaussianCombination] = None

    def __post_init__(self):
        if len(self.times) != len(self.weights):
            raise InvalidParameter("times and weights differ in length")
        if self.times and max(self.times) >= self.load_time:
            raise InvalidParameter("impulse times must lie before the load time")

    @property
    def times_float(self):
        return np.array([float(v) for v in self.times])

    @property
    def weights_float(self):
        return np.array([_to_float(v) for v in self.weights])


def gaussian_filter_kernel(x):
    """``G(x) = exp(-x^2) / sqrt(pi)``; the response to a unit impulse at 0."""
    x = np.asarray(x, dtype=float)
    return (np.exp(-x * x) / math.sqrt(math.pi))[()]


def impulse_synthesis(f, N, tau, cfg=DEFAULT_CONFIG, M=None):
    """Impulses at ``n t`` with ``t = tau/(N+1)`` whose Gaussian-filtered
    response is the Gaussian-translate fit of ``f``."""
    if not tau > 0:
        raise InvalidParameter("tau must be positive")
    if N < 1:
        raise InvalidParameter("impulse synthesis needs N >= 1")
    t = tau / (N + 1)
    combo = fit(f, N, t, cfg, M)
    ctx = combo.ctx
    sqrt_pi = ctx.sqrt(ctx.pi)
    times = tuple(n * ctx.mpf(t) for n in range(N + 1))
    weights = tuple(sqrt_pi * a for a in combo.a)
    return ImpulseTrain(times, weights, float(tau), combo.digits, combo)


def filter_train(train, x):
    """Response of the Gaussian filter to ``train``: ``sum_n w_n G(x - t_n)``.

    Summed term by term in the train's precision, independently of the
    Horner evaluation used for combinations.
    """
    ctx = _ctx(train.digits)
    inv_sqrt_pi = 1 / ctx.sqrt(ctx.pi)
    xs = np.asarray(x, dtype=float)
    out = np.empty(xs.shape)
    flat = out.reshape(-1)
    for i, xv in enumerate(xs.reshape(-1)):
        xm = ctx.mpf(float(xv))
        terms = (w * inv_sqrt_pi * ctx.exp(-(xm - s) ** 2) for w, s in zip(train.weights, train.times))
        flat[i] = float(ctx.fsum(terms))
    return out[()] if out.ndim == 0 else out


def coefficient_rows(c):
    """Rows ``index, shift, sign, log10|a|, value`` for export."""
    rows = []
    for n, (v, s, lg) in enumerate(zip(c.values, c.signs, c.log10_magnitudes)):
        rows.append((n, n * c.t, int(s), lg, v))
    return rows


def write_coefficient_csv(c, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "shift", "coefficient_sign",
                    "coefficient_log10_magnitude", "coefficient_value"])
        for n, shift, s, lg, v in coefficient_rows(c):
            w.writerow([n, format(shift, ".17g"), s, format(lg, ".17g"), format(v, ".17g")])
