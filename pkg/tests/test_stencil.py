import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from gausskit.errors import DuplicateNodes, OrderTooHigh, ZeroStep
from gausskit.hermite import gaussian_derivative
from gausskit.stencil import (apply_stencil, backward_difference_stencil, divided_difference_l2_error,
                              gaussian_derivative_bound, solve_stencil, truncation_error_bound,
                              vandermonde_det)


def gauss(x):
    return cmath.exp(-x * x) if isinstance(x, complex) else math.exp(-x * x)


def test_solve_examples():
    assert solve_stencil(1, (0, 1)).coeffs == (-1, 1)
    assert solve_stencil(2, (0, 1, 2)).coeffs == (1, -2, 1)
    assert solve_stencil(1, (-1, 0, 1)).coeffs == (Fraction(-1, 2), 0, Fraction(1, 2))


@pytest.mark.parametrize("k,nodes", [(1, (0, 1)), (2, (0, 1, 2)), (1, (-1, 0, 1)), (3, (-2, -1, 0, 1, 3)),
                                     (2, (Fraction(1, 3), Fraction(-1, 2), 2, Fraction(5, 7)))])
def test_solve_matches_sympy(k, nodes):
    ref = oracles.stencil_exact(k, nodes)
    got = solve_stencil(k, nodes).coeffs
    assert [Fraction(int(v.p), int(v.q)) for v in ref] == list(got)


def test_solve_errors():
    with pytest.raises(DuplicateNodes):
        solve_stencil(1, (0, 1, 1))
    with pytest.raises(DuplicateNodes):
        solve_stencil(1, (0.5 + 1j, 2, 0.5 + 1j))
    with pytest.raises(OrderTooHigh):
        solve_stencil(3, (0, 1, 2))


def test_backward_examples():
    s = backward_difference_stencil(1)
    assert s.nodes == (0, -1) and s.coeffs == (1, -1)
    assert backward_difference_stencil(2).coeffs == (1, -2, 1)
    assert backward_difference_stencil(3).coeffs == (1, -3, 3, -1)


@pytest.mark.parametrize("n", range(11))
def test_backward_matches_solve(n):
    a = backward_difference_stencil(n)
    b = solve_stencil(n, [-i for i in range(n + 1)])
    assert max(abs(float(x - y)) for x, y in zip(a.coeffs, b.coeffs)) < 1e-10


def test_apply_examples():
    fwd = solve_stencil(1, (0, 1))
    assert apply_stencil(fwd, lambda x: x * x, 0.0, 1.0) == 1
    cen = solve_stencil(1, (-1, 0, 1))
    assert apply_stencil(cen, lambda x: x * x, 0.0, 0.5) == 0
    assert abs(apply_stencil(backward_difference_stencil(1), gauss, 0.0, 0.01)) < 0.011
    with pytest.raises(ZeroStep):
        apply_stencil(cen, gauss, 0.0, 0.0)


def test_truncation_bound_examples():
    s = backward_difference_stencil(1)
    assert truncation_error_bound(s, 0.0, 0.3) == 0
    assert truncation_error_bound(s, 2.0, 0.01) == pytest.approx(0.01, rel=1e-14)
    for n in range(1, 5):
        s = backward_difference_stencil(n)
        r = truncation_error_bound(s, 1.0, 0.05) / truncation_error_bound(s, 1.0, 0.1)
        assert r == pytest.approx(2.0 ** -s.order_of_accuracy, rel=1e-12)
    with pytest.raises(ZeroStep):
        truncation_error_bound(s, 1.0, 0)


@pytest.mark.parametrize("n", range(1, 6))
def test_truncation_bound_is_rigorous(n):
    s = backward_difference_stencil(n)
    M = gaussian_derivative_bound(n + 1)
    for t in (0.2, 0.05):
        for x in np.linspace(-3, 3, 25):
            err = abs(apply_stencil(s, gauss, float(x), t) - gaussian_derivative(n, float(x)))
            assert err <= truncation_error_bound(s, M, t)


def test_vandermonde_examples():
    assert vandermonde_det((0, 1)) == 1
    assert vandermonde_det((0, 1, 2)) == 1
    assert vandermonde_det((0, 1, 1)) == 0


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=6, unique=True))
def test_vandermonde_matches_sympy_det(nodes):
    assert vandermonde_det(nodes) == Fraction(str(oracles.moment_det(nodes)))


node_sets = st.lists(st.fractions(-4, 4, max_denominator=6), min_size=1, max_size=7, unique=True)


@given(node_sets, st.data())
def test_moment_conditions(nodes, data):
    k = data.draw(st.integers(0, len(nodes) - 1))
    s = solve_stencil(k, nodes)
    for j in range(len(nodes)):
        m = sum(c * Fraction(v) ** j / math.factorial(j) for c, v in zip(s.coeffs, s.nodes))
        assert abs(float(m) - (j == k)) < 1e-10


@given(st.lists(st.floats(-3, 3), min_size=2, max_size=6,
                unique=True), st.data())
def test_moment_conditions_float_nodes(nodes, data):
    nodes = sorted(nodes)
    if min(np.diff(nodes)) < 0.05:
        return
    k = data.draw(st.integers(0, len(nodes) - 1))
    s = solve_stencil(k, nodes)
    for j in range(len(nodes)):
        m = sum(float(c) * v ** j / math.factorial(j) for c, v in zip(s.coeffs, nodes))
        assert abs(m - (j == k)) < 1e-10 * max(1.0, sum(abs(float(c)) * abs(v) ** j for c, v in zip(s.coeffs, nodes)))


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=6, unique=True), st.data(),
       st.sampled_from([0.1, 0.5, 1.0]), st.floats(-2, 2))
def test_exact_on_monomials(nodes, data, t, x):
    n = len(nodes) - 1
    k = data.draw(st.integers(0, n))
    s = solve_stencil(k, nodes)
    for j in range(n + 1):
        got = apply_stencil(s, lambda y: y ** j, x, t)
        exact = math.perm(j, k) * x ** (j - k) if j >= k else 0.0
        scale = max(1.0, sum(abs(float(c)) * abs(x + float(v) * t) ** j for c, v in zip(s.coeffs, s.nodes)) / t ** k)
        assert abs(got - exact) <= 1e-9 * scale


@pytest.mark.parametrize("n", range(1, 5))
def test_observed_order(n):
    s = solve_stencil(1, range(n + 1))
    x = 0.3
    exact = gaussian_derivative(1, x)
    t = 0.05
    e1 = abs(apply_stencil(s, gauss, x, t) - exact)
    e2 = abs(apply_stencil(s, gauss, x, t / 2) - exact)
    assert math.log2(e1 / e2) >= s.order_of_accuracy - 0.3


def test_divided_difference_examples():
    assert divided_difference_l2_error(0, 0.3) == 0
    assert divided_difference_l2_error(1, 0.01) <= 0.6 * divided_difference_l2_error(1, 0.02)
    v = divided_difference_l2_error(2, 0.01)
    assert 0 < v < divided_difference_l2_error(2, 0.1)


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("t", [0.08, 0.04])
def test_o_t_law(n, t):
    r = divided_difference_l2_error(n, t / 2) / divided_difference_l2_error(n, t)
    assert 0.3 <= r <= 0.7


def test_divided_difference_other_p():
    # p = 1 follows the same O(t) law
    r = divided_difference_l2_error(2, 0.02, p=1) / divided_difference_l2_error(2, 0.04, p=1)
    assert 0.3 <= r <= 0.7


@pytest.mark.parametrize("k", [1, 2])
def test_complex_circle_nodes(k):
    n, r, t = 4, 0.5, 0.01
    nodes = [r * cmath.exp(2j * math.pi * j / (n + 1)) for j in range(n + 1)]
    circ = solve_stencil(k, nodes)
    assert circ.is_complex
    real = solve_stencil(k, range(-2, 3))
    a = apply_stencil(circ, gauss, 0.0, t)
    b = apply_stencil(real, gauss, 0.0, t)
    assert abs(a - b) < 1e-6
    assert abs(a - gaussian_derivative(k, 0.0)) < 1e-6


def test_gaussian_derivative_bound_covers_grid_max():
    for order in range(1, 7):
        xs = np.linspace(-5, 5, 20001)
        assert gaussian_derivative_bound(order) >= np.max(np.abs(gaussian_derivative(order, xs)))
