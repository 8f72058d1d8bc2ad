import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

import oracles
from gausskit.funcspec import catalog, parse
from gausskit.hermite import (HermiteCoefficients, compute_bn, eval_hermite_expansion, expansion_function,
                              gaussian_derivative, hermite_function, hermite_functions, hermite_poly)
from gausskit.numerics.quadrature import DEFAULT_CONFIG, integrate
from gausskit.stencil import apply_stencil, solve_stencil

CAT = catalog()


def test_hermite_poly_examples():
    assert hermite_poly(0, 1.7) == 1
    assert hermite_poly(1, 3.0) == 6
    assert hermite_poly(2, 1.0) == 2


@pytest.mark.parametrize("n", range(8))
def test_hermite_poly_matches_rodrigues_symbolic(n):
    expr, x = oracles.hermite_symbolic(n)
    for xv in (-2.5, -0.4, 0.0, 1.1, 3.0):
        assert hermite_poly(n, xv) == pytest.approx(float(expr.subs(x, sp.Float(xv))), rel=1e-12, abs=1e-12)


def test_hermite_function_examples():
    assert hermite_function(0, 0.0) == pytest.approx(math.pi ** -0.25, rel=1e-15)
    assert hermite_function(1, 0.0) == 0
    assert integrate(lambda x: hermite_function(3, x) ** 2) == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("n", [0, 5, 37, 120, 200])
def test_hermite_function_against_mpmath(n):
    for xv in (-7.3, -1.0, 0.2, 4.4, 15.0):
        ref = float(oracles.hermite_function(n, xv, 60))
        assert hermite_function(n, xv) == pytest.approx(ref, rel=1e-9, abs=1e-13)


def test_large_order_does_not_overflow():
    vals = hermite_functions(200, np.linspace(-25, 25, 101))
    assert np.all(np.isfinite(vals))


def test_gaussian_derivative_examples():
    assert gaussian_derivative(0, 0.0) == 1
    assert gaussian_derivative(1, 1.0) == pytest.approx(-2 * math.exp(-1), rel=1e-15)
    assert gaussian_derivative(2, 0.0) == pytest.approx(-2, rel=1e-15)


def test_orthonormality():
    worst = 0.0
    for m in range(11):
        for n in range(m, 11):
            val = integrate(lambda x: hermite_function(m, x) * hermite_function(n, x))
            worst = max(worst, abs(val - (m == n)))
    assert worst < 1e-8


@pytest.mark.parametrize("n", range(1, 6))
def test_rodrigues_via_stencil(n):
    # central stencil of 13 nodes; e^{x^2} times the numerical n-th derivative
    s = solve_stencil(n, list(range(-6, 7)))
    for xv in np.linspace(-3, 3, 13):
        d = apply_stencil(s, lambda y: math.exp(-y * y), float(xv), 0.05)
        approx = (-1) ** n * math.exp(xv * xv) * d
        exact = hermite_poly(n, float(xv))
        assert approx == pytest.approx(exact, rel=1e-6, abs=1e-6 * max(1.0, abs(exact)))


def test_compute_bn_examples():
    b = compute_bn(parse("exp(-x^2)"), 3)
    assert np.allclose(b.b, [1, 0, 0, 0], atol=1e-10)
    assert b.truncation_M is None
    b = compute_bn(parse("-2*x*exp(-x^2)"), 3)
    assert np.allclose(b.b, [0, 1, 0, 0], atol=1e-10)
    assert np.all(compute_bn(parse("0"), 5).b == 0)


def test_compute_bn_against_mpmath_oracle():
    f = CAT["poly_jump"]
    ref = oracles.bn(lambda x: (x - 1) ** 2, 8, [-1, 2])
    got = compute_bn(f, 8).b
    assert np.allclose(got, [float(v) for v in ref], rtol=1e-9, atol=1e-12)


def test_truncation_when_decay_is_too_slow():
    f = parse("exp(-0.25*x^2)")
    b = compute_bn(f, 4)
    M = b.truncation_M
    assert M is not None

    def tail(m):
        # ||f (1 - chi_[-m,m])||_2 for f = exp(-x^2/4), from erfc
        return math.sqrt(2 * math.sqrt(math.pi / 2) * math.erfc(m / math.sqrt(2)))

    assert tail(M) < DEFAULT_CONFIG.abs_tol <= tail(M / 2)
    assert compute_bn(f, 4, M=3.0).truncation_M == 3.0


def test_eval_expansion_examples():
    assert eval_hermite_expansion([1, 0, 0], 0.0) == 1
    assert eval_hermite_expansion([0, 1], 1.0) == pytest.approx(-2 * math.exp(-1), rel=1e-14)
    assert eval_hermite_expansion([1, 1], 0.0) == pytest.approx(1, abs=1e-15)


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=7))
def test_idempotent_on_span(b):
    f = expansion_function(HermiteCoefficients.from_b(b))
    got = compute_bn(f, len(b) - 1)
    assert got.truncation_M is None
    assert np.allclose(got.b, b, rtol=0, atol=1e-8)


def _weighted_error(f, hc):
    """``||(f - S_N) exp(x^2/2)||_2``; on this scale S_N is sum c_n h_n."""
    lo, hi = f.support
    T = DEFAULT_CONFIG.tail_cutoff

    def sq(x):
        fx = np.where(f(x) == 0, 0.0, f(x) * np.exp(0.5 * np.minimum(x * x, 1400.0)))
        s = np.tensordot(hc.c, hermite_functions(hc.N, x), axes=(0, 0))
        return (fx - s) ** 2

    edges = sorted({-T, T, *(p for p in (lo, hi) if math.isfinite(p))})
    return math.sqrt(float(integrate(sq, (edges[0], edges[-1]), DEFAULT_CONFIG, edges[1:-1])))


@pytest.mark.parametrize("name", sorted(CAT))
def test_weighted_error_non_increasing(name):
    f = CAT[name]
    full = compute_bn(f, 24)
    errs = []
    for N in range(0, 25, 4):
        hc = HermiteCoefficients.from_c(full.c[:N + 1])
        errs.append(_weighted_error(f, hc))
    for a, b in zip(errs, errs[1:]):
        assert b <= a * (1 + 1e-9) + 10 * DEFAULT_CONFIG.abs_tol


def test_plain_l2_error_agrees_with_independent_oracle():
    # sine window: package partial sum vs an mpmath-only partial sum
    f = CAT["sine_window"]
    hc = compute_bn(f, 20)
    T = DEFAULT_CONFIG.tail_cutoff
    err = math.sqrt(float(integrate(lambda x: (f(x) - eval_hermite_expansion(hc, x)) ** 2, (-T, T),
                                    DEFAULT_CONFIG, f.breakpoints)))
    with mpmath.workdps(30):
        ref = oracles.hermite_partial_sum_l2(
            lambda x: mpmath.sin(x) if -mpmath.pi <= x < mpmath.pi else 0, 20,
            [-mpmath.pi, mpmath.pi], -12, 12)
    assert err == pytest.approx(ref, rel=1e-6)
