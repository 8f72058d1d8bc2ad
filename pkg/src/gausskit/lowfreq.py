"""Low-frequency complex exponential sums in the Gaussian-weighted norm.

Fourier convention: ``F[f](s) = (2 pi)^-1/2 integral f(x) exp(-i s x) dx``.
Under it ``F[exp(-(x - n t)^2)] = exp(-i n t s) exp(-s^2/4) / sqrt(2)``, so a
Gaussian-translate fit ``sum a_n exp(-(x - n t)^2)`` of the smoothed target

    f2 = F^-1[exp(-s^2/4) f / sqrt(2)]  =  (2 pi)^-1/2 exp(-x^2) * F^-1[f]

carries over to ``f(s) ~ sum a_n exp(-i n t s)`` with
``||f - sum||_{2,G} <= sqrt(2) ||f2 - fit||_2``.

Two ways of producing the weights are offered: the Hermite/backward
difference construction (``method="thm3"``) and the least-squares projection
of f2 (``method="lsq"``).  ``f2`` itself is obtained either directly from the
damped spectrum (``route="direct"``) or by sampling ``F^-1[f]`` on a grid and
convolving with the Gaussian (``route="grid"``).

Complex targets are passed as a real part ``f`` plus an optional imaginary
part ``f_imag``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import EdgeLeakage, FrequencyBound, InvalidDomain, InvalidParameter, ZeroStep
from .funcspec import TargetFunction, parse, reflect
from .gaussfit import _ctx, bn_to_an
from .hermite import HermiteCoefficients, hermite_functions, normalized_hermite
from .lsq import DEFAULT_PRECISION, gram_matrix
from .numerics.linalg import condition_estimate, context, solve_dense
from .numerics.quadrature import DEFAULT_CONFIG, as_vectorized, integrate

SQRT_2PI = math.sqrt(2.0 * math.pi)
DEFAULT_SPACING = 0.01
DEFAULT_HALFWIDTH = 15.0
_GL_ORDER = 20
_GL_PANEL = 0.25


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True, eq=False)
class TrigCombination:
    """``s -> sum_n a[n] exp(-i n t s)`` with extended-precision complex ``a``."""

    t: float
    a: tuple
    digits: int
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.t == 0:
            raise ZeroStep("step t must be nonzero")

    @property
    def N(self):
        return len(self.a) - 1

    @property
    def max_frequency(self):
        return self.N * abs(self.t)

    @property
    def values(self):
        return np.array([complex(v) for v in self.a])

    @property
    def frequencies(self):
        return np.arange(self.N + 1) * self.t

    def __call__(self, s):
        return eval_trig(self, s)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples on a uniform grid, read back by linear interpolation and taken
    as zero outside the grid."""

    xs: np.ndarray
    values: np.ndarray
    spacing: float

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        vals = np.asarray(self.values)
        if xs.ndim != 1 or len(xs) < 2 or len(vals) != len(xs):
            raise InvalidParameter("grid needs at least two points and matching values")
        if not np.allclose(np.diff(xs), self.spacing, rtol=1e-9, atol=0):
            raise InvalidParameter("grid must be uniform with the stated spacing")
        if not np.all(np.isfinite(vals)):
            raise InvalidParameter("grid values must be finite")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "values", vals)

    @classmethod
    def uniform(cls, halfwidth, spacing, fn):
        n = int(round(halfwidth / spacing))
        xs = np.arange(-n, n + 1) * spacing
        return cls(xs, np.asarray(fn(xs)), spacing)

    @property
    def support(self):
        return (float(self.xs[0]), float(self.xs[-1]))

    @property
    def breakpoints(self):
        return ()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        v = self.values
        if np.iscomplexobj(v):
            out = (np.interp(x, self.xs, v.real, left=0.0, right=0.0)
                   + 1j * np.interp(x, self.xs, v.imag, left=0.0, right=0.0))
        else:
            out = np.interp(x, self.xs, v, left=0.0, right=0.0)
        return out[()] if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# helpers


def _complex_target(f, f_imag):
    if f_imag is None:
        return as_vectorized(f)
    fr, fi = as_vectorized(f), as_vectorized(f_imag)
    return lambda s: np.asarray(fr(s)) + 1j * np.asarray(fi(s))


def _support_and_breaks(*fs):
    fs = [f for f in fs if f is not None]
    lo = min(getattr(f, "support", (-math.inf, math.inf))[0] for f in fs)
    hi = max(getattr(f, "support", (-math.inf, math.inf))[1] for f in fs)
    bps = sorted({float(p) for f in fs for p in getattr(f, "breakpoints", ())})
    return lo, hi, bps


def _gl_nodes(lo, hi, breaks, panel=_GL_PANEL, order=_GL_ORDER):
    """Composite Gauss-Legendre nodes and weights on [lo, hi]."""
    x0, w0 = np.polynomial.legendre.leggauss(order)
    edges = [lo, *[p for p in breaks if lo < p < hi], hi]
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        k = max(1, math.ceil((b - a) / panel))
        cuts = np.linspace(a, b, k + 1)
        for c, d in zip(cuts[:-1], cuts[1:]):
            xs.append(0.5 * (c + d) + 0.5 * (d - c) * x0)
            ws.append(0.5 * (d - c) * w0)
    return np.concatenate(xs), np.concatenate(ws)


def _check_frequency(N, t, omega):
    if omega is not None and N * abs(t) >= omega:
        raise FrequencyBound(f"highest frequency N*|t| = {N * abs(t):g} is not below omega = {omega:g}")


# ---------------------------------------------------------------------------
# transforms


def _cell_integrals(s, h):
    """``I0 = int_0^h exp(-i s u) du`` and ``I1 = int_0^h u exp(-i s u) du``."""
    z = s * h
    if abs(z) < 1e-3:
        iz = 1j * z
        I0 = h * (1 - iz / 2 + iz ** 2 / 6 - iz ** 3 / 24)
        I1 = h * h * (0.5 - iz / 3 + iz ** 2 / 8 - iz ** 3 / 30)
        return I0, I1
    e = np.exp(-1j * z)
    I0 = (1 - e) / (1j * s)
    I1 = e * (1j * h / s + 1 / (s * s)) - 1 / (s * s)
    return I0, I1


def _grid_transform(g, s):
    xs, v, h = g.xs, g.values, g.spacing
    I0, I1 = _cell_integrals(s, h)
    left, right = v[:-1], v[1:]
    phase = np.exp(-1j * s * xs[:-1])
    total = np.sum(phase * (left * I0 + (right - left) / h * I1))
    return complex(total) / SQRT_2PI


def fourier_transform(f, s, cfg=DEFAULT_CONFIG, f_imag=None):
    """``F[f](s)`` by quadrature.  Panels are split at whole periods of
    ``exp(-i s x)`` so the oscillation is resolved even for large ``|s|``."""
    s = float(s)
    if isinstance(f, GridFunction):
        return _grid_transform(f, s)
    fun = _complex_target(f, f_imag)
    lo, hi, bps = _support_and_breaks(f, f_imag)
    T = cfg.tail_cutoff
    a = lo if math.isfinite(lo) else -T
    b = hi if math.isfinite(hi) else T
    if s != 0:
        period = 2 * math.pi / abs(s)
        if (b - a) / period > 4:
            k0, k1 = math.ceil(a / period), math.floor(b / period)
            if k1 - k0 < 20000:
                bps = bps + [k * period for k in range(k0, k1 + 1)]

    def integrand(x):
        return np.asarray(fun(x)) * np.exp(-1j * s * x)

    domain = (lo, hi)
    val = integrate(integrand, domain, cfg, bps)
    return complex(val) / SQRT_2PI


def inverse_fourier_grid(f, halfwidth=DEFAULT_HALFWIDTH, spacing=DEFAULT_SPACING,
                         cfg=DEFAULT_CONFIG, f_imag=None):
    """``F^-1[f]`` sampled on ``[-L, L]``, integrating over ``s`` with
    composite Gauss-Legendre rules.  ``f`` must have decayed below
    ``cfg.abs_tol`` at the edges of its integration range."""
    fun = _complex_target(f, f_imag)
    lo, hi, bps = _support_and_breaks(f, f_imag)
    T = cfg.tail_cutoff
    a = lo if math.isfinite(lo) else -T
    b = hi if math.isfinite(hi) else T
    edge = np.abs(np.asarray(fun(np.array([a, b]))))
    open_ends = [not math.isfinite(lo), not math.isfinite(hi)]
    if any(o and v > cfg.abs_tol for o, v in zip(open_ends, edge)):
        raise EdgeLeakage(
            f"target is {float(np.max(edge)):.3g} at |s| = {T:g}; its inverse transform "
            "is not a function the grid can hold (use the direct route)")
    # keep panels short enough to resolve exp(i s x) for |x| <= L
    panel = min(_GL_PANEL, 8.0 / max(halfwidth, 1.0))
    ss, ws = _gl_nodes(a, b, bps, panel)
    fs = np.asarray(fun(ss), dtype=complex) * ws
    n = int(round(halfwidth / spacing))
    xs = np.arange(-n, n + 1) * spacing
    vals = np.empty(len(xs), dtype=complex)
    for i0 in range(0, len(xs), 256):
        chunk = xs[i0:i0 + 256]
        vals[i0:i0 + 256] = np.exp(1j * np.outer(chunk, ss)) @ fs
    return GridFunction(xs, vals / SQRT_2PI, spacing)


def _hat_kernel(h, lags):
    """``(2 pi)^-1/2 integral hat_h(d - y) exp(-y^2) dy`` for d = lags*h, where
    ``hat_h`` is the piecewise-linear interpolation basis function."""
    x0, w0 = np.polynomial.legendre.leggauss(16)
    d = lags * h
    # left half: hat rises on [d - h, d]; right half falls on [d, d + h]
    u = 0.5 * h * (x0 + 1)  # offsets in [0, h]
    left = ((1 - u / h)[None, :] * np.exp(-(d[:, None] - u[None, :]) ** 2)) @ w0
    right = ((1 - u / h)[None, :] * np.exp(-(d[:, None] + u[None, :]) ** 2)) @ w0
    return 0.5 * h * (left + right) / SQRT_2PI


def gaussian_convolve(g, cfg=DEFAULT_CONFIG):
    """``(2 pi)^-1/2 exp(-x^2) * g`` on g's grid, with g read as its linear
    interpolant (each hat function convolved exactly by quadrature)."""
    edge = max(abs(g.values[0]), abs(g.values[-1]))
    if edge > cfg.abs_tol:
        raise EdgeLeakage(f"grid function is {edge:.3g} at its edges; widen the grid")
    n = len(g.xs)
    lags = np.arange(-(n - 1), n)
    K = _hat_kernel(g.spacing, lags.astype(float))
    conv = np.convolve(g.values, K)[n - 1:2 * n - 1]
    return GridFunction(g.xs, conv, g.spacing)


def smoothed_target(f, f_imag=None, cfg=DEFAULT_CONFIG, window=14.0):
    """``f2 = F^-1[exp(-s^2/4) f / sqrt(2)]`` as a vectorised callable.

    The damped spectrum is integrated once on a fixed composite
    Gauss-Legendre rule over ``|s| <= window``.
    """
    fun = _complex_target(f, f_imag)
    lo, hi, bps = _support_and_breaks(f, f_imag)
    a, b = max(lo, -window), min(hi, window)
    if not a < b:
        return lambda x: np.zeros(np.shape(x), dtype=complex)
    ss, ws = _gl_nodes(a, b, bps)
    spec = np.asarray(fun(ss), dtype=complex) * np.exp(-ss * ss / 4) / math.sqrt(2.0) * ws / SQRT_2PI

    def f2(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1)
        out = np.empty(flat.shape, dtype=complex)
        for i0 in range(0, len(flat), 512):
            out[i0:i0 + 512] = np.exp(1j * np.outer(flat[i0:i0 + 512], ss)) @ spec
        return out.reshape(x.shape)[()]

    return f2


# ---------------------------------------------------------------------------
# fitting


def eval_trig(c, s):
    """``sum_n a_n z^n`` with ``z = exp(-i t s)``, by Horner in c's precision."""
    ctx = _ctx(c.digits)
    coeffs = c.a[::-1]
    tt = ctx.mpf(c.t)
    s_arr = np.asarray(s, dtype=float)
    out = np.empty(s_arr.shape, dtype=complex)
    flat = out.reshape(-1)
    for i, sv in enumerate(s_arr.reshape(-1)):
        z = ctx.expj(-tt * ctx.mpf(float(sv)))
        acc = coeffs[0]
        for ak in coeffs[1:]:
            acc = acc * z + ak
        flat[i] = complex(acc)
    return out[()] if out.ndim == 0 else out


def _spectral_rhs(f, f_imag, N, t, precision, cfg):
    """``r_j = integral f2(x) exp(-(x - j t)^2) dx``, computed on the
    frequency side as ``(1/2) integral f(s) exp(-s^2/2) exp(i j t s) ds``."""
    parts = [p for p in (f, f_imag) if p is not None]
    ctx = context(precision)
    if all(getattr(p, "supports_mp", False) for p in parts):
        q = context(max(precision // 2 + 10, 20))
        S = math.sqrt(2 * (q.dps + 10) * math.log(10.0)) + 1.0
        lo, hi, bps = _support_and_breaks(f, f_imag)
        a, b = max(lo, -S), min(hi, S)
        if not a < b:
            return [ctx.mpc(0)] * (N + 1)
        edges = [a, *[p for p in bps if a < p < b], b]
        pts = []
        for u, v in zip(edges[:-1], edges[1:]):
            k = max(1, math.ceil(v - u))
            pts += [u + (v - u) * i / k for i in range(k)]
        pts = [q.mpf(p) for p in pts + [b]]
        tt = q.mpf(t)
        out = []
        for j in range(N + 1):
            def g(s, j=j):
                val = f.mp_eval(s, q)
                if f_imag is not None:
                    val = val + 1j * f_imag.mp_eval(s, q)
                return val * q.exp(-s * s / 2) * q.expj(j * tt * s)
            out.append(ctx.convert(q.quad(g, pts) / 2))
        return out
    fun = _complex_target(f, f_imag)
    lo, hi, bps = _support_and_breaks(f, f_imag)
    S = math.sqrt(2 * 40 * math.log(10.0))
    ss, ws = _gl_nodes(max(lo, -S), min(hi, S), bps)
    base = np.asarray(fun(ss), dtype=complex) * np.exp(-ss * ss / 2) * ws / 2
    return [ctx.mpc(complex(np.sum(base * np.exp(1j * j * t * ss)))) for j in range(N + 1)]


def _choose_f2_truncation(xs, ws, vals, N, halfwidth):
    """Truncation half-width M minimising the estimated L2 error of the
    order-N Hermite partial sum of ``f2 chi_[-M, M]`` against f2 itself.

    Slowly decaying f2 makes ``f2 exp(x^2/2)`` grow, and then a wide window
    inflates the expansion weights enormously; a narrow one loses the tail.
    Candidates are the half-integers up to the grid half-width.
    """
    funcs = hermite_functions(N, xs)
    best = None
    for M in np.arange(1.0, halfwidth + 0.25, 0.5):
        keep = np.abs(xs) <= M
        c = normalized_hermite(N, xs[keep]) @ (vals[keep] * ws[keep])
        approx = np.tensordot(c, funcs, axes=(0, 0)) * np.exp(-0.5 * xs * xs)
        err = float(np.sum(np.abs(vals - approx) ** 2 * ws))
        if best is None or err < best[0]:
            best = (err, float(M))
    return best[1]


def _hermite_coeffs_fixed(xs, ws, vals, N, M):
    # f2 is entire, so a fixed composite Gauss-Legendre rule converges fast;
    # adaptive refinement would only chase rounding noise in f2's far tails.
    keep = np.abs(xs) <= M
    table = normalized_hermite(N, xs[keep])
    c = table @ (vals[keep] * ws[keep])
    return HermiteCoefficients.from_c(c, M)


def _fit_thm3(f, f_imag, N, t, cfg, route, halfwidth, spacing, M):
    if route == "direct":
        f2 = smoothed_target(f, f_imag, cfg)
    elif route == "grid":
        g = inverse_fourier_grid(f, halfwidth, spacing, cfg, f_imag)
        f2 = gaussian_convolve(g, cfg)
    else:
        raise InvalidParameter(f"unknown route {route!r}")
    xs, ws = _gl_nodes(-halfwidth, halfwidth, [])
    vals = np.asarray(f2(xs), dtype=complex)
    trunc = _choose_f2_truncation(xs, ws, vals, N, halfwidth) if M is None else float(M)
    b_re = _hermite_coeffs_fixed(xs, ws, vals.real, N, trunc)
    b_im = _hermite_coeffs_fixed(xs, ws, vals.imag, N, trunc)
    c_re = bn_to_an(b_re, t)
    c_im = bn_to_an(b_im, t)
    digits = max(c_re.digits, c_im.digits)
    ctx = _ctx(digits)
    a = tuple(ctx.mpc(ctx.convert(x), ctx.convert(y)) for x, y in zip(c_re.a, c_im.a))
    info = {"method": "thm3", "route": route, "truncation_M": trunc,
            "b_real": b_re.b.tolist(), "b_imag": b_im.b.tolist(), "f2": f2}
    return a, digits, info


def _fit_lsq(f, f_imag, N, t, cfg, precision):
    M = gram_matrix(N, t, precision)
    r = _spectral_rhs(f, f_imag, N, t, precision, cfg)
    a_re = solve_dense(M, [v.real for v in r], precision)
    a_im = solve_dense(M, [v.imag for v in r], precision)
    ctx = _ctx(2 * precision)
    a = tuple(ctx.mpc(x, y) for x, y in zip(a_re, a_im))
    info = {"method": "lsq", "precision_digits": precision,
            "condition_estimate": condition_estimate(M, precision)}
    return a, 2 * precision, info


def fit_lowfreq(f, N, t, cfg=DEFAULT_CONFIG, f_imag=None, method="thm3", route="direct",
                halfwidth=DEFAULT_HALFWIDTH, spacing=DEFAULT_SPACING, M=None,
                precision=DEFAULT_PRECISION, omega=None):
    """Weights ``a_n`` with ``f(s) ~ sum_n a_n exp(-i n t s)`` in the
    Gaussian-weighted norm."""
    if t == 0:
        raise ZeroStep("step t must be nonzero")
    if N < 0:
        raise InvalidParameter("N must be non-negative")
    _check_frequency(N, t, omega)
    if not halfwidth > 0 or not spacing > 0:
        raise InvalidParameter("grid half-width and spacing must be positive")
    t = float(t)
    if method == "thm3":
        a, digits, info = _fit_thm3(f, f_imag, N, t, cfg, route, halfwidth, spacing, M)
    elif method == "lsq":
        a, digits, info = _fit_lsq(f, f_imag, N, t, cfg, precision)
    else:
        raise InvalidParameter(f"unknown method {method!r}")
    return TrigCombination(t, a, digits, info)


def weighted_fit_error(f, c, cfg=DEFAULT_CONFIG, f_imag=None):
    """``||f - c||_{2,G}``, the L2 distance under the weight exp(-s^2)."""
    fun = _complex_target(f, f_imag)
    _, _, bps = _support_and_breaks(f, f_imag)

    def sq(s):
        return np.abs(np.asarray(fun(s)) - eval_trig(c, s)) ** 2 * np.exp(-s * s)

    return math.sqrt(max(float(integrate(sq, "whole-line", cfg, bps)), 0.0))


def smoothed_fit_error(f, c, cfg=DEFAULT_CONFIG, f_imag=None, halfwidth=DEFAULT_HALFWIDTH):
    """``||f2 - sum_n a_n exp(-(x - n t)^2)||_2`` on the x side."""
    f2 = c.info.get("f2") or smoothed_target(f, f_imag, cfg)
    ctx = _ctx(c.digits)
    tt = ctx.mpf(c.t)

    def combo(x):
        out = np.empty(np.shape(x), dtype=complex)
        for i, xv in enumerate(np.asarray(x, dtype=float)):
            xm = ctx.mpf(float(xv))
            out[i] = complex(ctx.fsum(a * ctx.exp(-(xm - n * tt) ** 2) for n, a in enumerate(c.a)))
        return out

    L = halfwidth + c.max_frequency
    sq = lambda x: np.abs(f2(x) - combo(x)) ** 2  # noqa: E731
    return math.sqrt(max(float(integrate(sq, (-L, L), cfg)), 0.0))


# ---------------------------------------------------------------------------
# sine/cosine series on a finite interval


def even_part(g):
    return lambda x: 0.5 * (np.asarray(g(x)) + np.asarray(g(-np.asarray(x))))


def odd_part(g):
    return lambda x: 0.5 * (np.asarray(g(x)) - np.asarray(g(-np.asarray(x))))


def _restrict(f, a, b):
    chi = parse(f"chi({float(a)!r}, {float(b)!r})")
    return f * chi


def _interval_l2(g, a, b, cfg, bps=()):
    sq = lambda x: np.abs(np.asarray(g(x))) ** 2  # noqa: E731
    return math.sqrt(max(float(integrate(sq, (a, b), cfg, [p for p in bps if a < p < b])), 0.0))


@dataclass(frozen=True, eq=False)
class SinCosFit:
    cos: np.ndarray
    sin: np.ndarray
    t: float
    interval: tuple
    error_l2: float
    error_weighted: float
    combination: Optional[TrigCombination] = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        n = np.arange(len(self.cos))
        ph = np.multiply.outer(x, n * self.t)
        return (np.cos(ph) @ self.cos + np.sin(ph) @ self.sin)[()]


def fit_sincos(f, interval, N, t, omega, cfg=DEFAULT_CONFIG, method="thm3", extension="zero",
               **kw):
    """Real series ``sum_n (A_n cos(n t x) + B_n sin(n t x))`` approximating a
    real ``f`` on a finite interval, with every frequency below ``omega``.

    ``extension="zero"`` treats f as zero outside the interval;
    ``"natural"`` keeps f's own values there.
    """
    a, b = (float(v) for v in interval)
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise InvalidDomain(f"need a finite interval a < b, got [{a}, {b}]")
    _check_frequency(N, t, omega)
    if extension == "zero":
        target = _restrict(f, a, b)
    elif extension == "natural":
        target = f
    else:
        raise InvalidParameter(f"unknown extension {extension!r}")
    c = fit_lowfreq(target, N, t, cfg, method=method, omega=omega, **kw)
    vals = c.values
    res = SinCosFit(vals.real.copy(), vals.imag.copy(), float(t), (a, b), 0.0, 0.0, c)
    bps = tuple(getattr(f, "breakpoints", ()))
    err = _interval_l2(lambda x: np.asarray(f(x)) - res(x), a, b, cfg, bps)
    werr = weighted_fit_error(target, c, cfg)
    return SinCosFit(res.cos, res.sin, res.t, (a, b), err, werr, c)


@dataclass(frozen=True, eq=False)
class CosineFit:
    cos: np.ndarray
    t: float
    b: float
    error_l2: float
    sincos: SinCosFit

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        n = np.arange(len(self.cos))
        return (np.cos(np.multiply.outer(x, n * self.t)) @ self.cos)[()]


def even_extension(f, b, extension="zero"):
    """``f(|x|)`` on ``[-b, b]`` (zero elsewhere), or on the whole line when
    ``extension="natural"``."""
    b = float(b)
    if extension == "natural":
        g = as_vectorized(f)
        bps = tuple(sorted({p for q in getattr(f, "breakpoints", ()) if q > 0 for p in (q, -q)}))
        return TargetFunction.from_callable(lambda x: g(np.abs(x)), breakpoints=bps)
    return _restrict(f, 0.0, b) + _restrict(reflect(f), -b, 0.0)


def fit_cosine_even(f, b, N, t, omega, cfg=DEFAULT_CONFIG, method="thm3", extension="zero", **kw):
    """Cosine-only series on ``[0, b]``: fit the even extension of f with a
    sine/cosine series and keep the cosine (even) half."""
    if not b > 0:
        raise InvalidDomain("b must be positive")
    g = even_extension(f, b, extension)
    sc = fit_sincos(g, (-b, b), N, t, omega, cfg, method=method, extension=extension, **kw)
    cos = sc.cos.copy()
    fit = CosineFit(cos, float(t), float(b), 0.0, sc)
    bps = tuple(getattr(f, "breakpoints", ()))
    err = _interval_l2(lambda x: np.asarray(f(x)) - fit(x), 0.0, b, cfg, bps)
    return CosineFit(cos, float(t), float(b), err, sc)
