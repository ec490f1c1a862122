import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diffgeo.errors import DomainError, InvariantError
from diffgeo.funcspace import (
    GridFunction,
    SmoothFunction,
    antiderivative,
    ck_norm,
    cumulative_integral,
    evaluate,
    finite_difference_derivative,
    grid,
    interpolate_rows,
    iota,
    refined_max,
    sup_norm,
)


def test_grid_endpoints_and_spacing():
    x = grid(8)
    assert x[0] == 0.0 and x[-1] == 1.0
    assert np.allclose(np.diff(x), 0.125)


def test_gridfunction_is_read_only():
    f = GridFunction(np.zeros(5))
    with pytest.raises(ValueError):
        f.values[0] = 1.0


def test_gridfunction_rejects_bad_shapes():
    with pytest.raises(InvariantError):
        GridFunction(np.zeros(5), np.zeros((1, 4)))
    with pytest.raises(InvariantError):
        GridFunction(np.array([0.0, np.nan, 1.0]))


def test_arithmetic_truncates_to_common_order():
    s = SmoothFunction.sine(2.0)
    a, b = s.sample(32, 2), s.sample(32, 1)
    c = a - b
    assert c.order == 1
    assert np.all(c.values == 0.0)
    assert np.allclose((2.0 * a).values, 2.0 * a.values)
    assert np.allclose((-a + a).values, 0.0)


def test_dict_round_trip():
    f = SmoothFunction.polynomial([1.0, -2.0, 0.5]).sample(16, 1)
    g = GridFunction.from_dict(f.to_dict())
    assert np.array_equal(g.rows, f.rows)


def test_evaluate_exact_at_nodes_and_rejects_outside():
    f = SmoothFunction.sine(3.0).sample(64)
    assert evaluate(f, 0.5) == f.values[32]
    with pytest.raises(DomainError):
        evaluate(f, 1.5)
    with pytest.raises(DomainError):
        f(-0.01)


@pytest.mark.parametrize("order, tol", [(0, 1e-6), (1, 1e-8), (2, 1e-11)])
def test_interpolation_accuracy_by_available_derivatives(order, tol):
    s = SmoothFunction.sine(5.0, phase=0.3)
    f = s.sample(256, order)
    y = np.linspace(0.0, 1.0, 1001)
    got = interpolate_rows(f.rows, y, upto=0)[0]
    assert np.max(np.abs(got - s(y))) < tol


def test_quintic_hermite_reproduces_quintics():
    p = SmoothFunction.polynomial([0.1, -1.0, 2.0, 0.5, -3.0, 1.5])
    rows = p.jet(grid(8), 2)
    y = np.linspace(0.0, 1.0, 77)
    assert np.allclose(interpolate_rows(rows, y, upto=0)[0], p(y), atol=1e-13)


def test_refined_max_finds_interior_peak():
    # peak of sin(pi x) sits between nodes for odd N
    f = SmoothFunction.sine(math.pi).sample(9, 2)
    assert sup_norm(f) < 1.0 - 1e-3
    assert abs(sup_norm(f, refine=True) - 1.0) < 1e-6
    assert abs(refined_max(f, lambda v: -v) - 0.0) < 1e-15


def test_ck_norm_sums_rows():
    f = SmoothFunction.polynomial([0.0, 0.0, 1.0]).sample(10, 2)
    assert ck_norm(f) == pytest.approx(1.0 + 2.0 + 2.0)
    assert ck_norm(f, 0) == pytest.approx(1.0)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_cumulative_integral_of_exponential(order):
    n = 64
    x = grid(n)
    rows = np.array([np.exp(2 * x)] * (order + 1)) * (2.0 ** np.arange(order + 1))[:, None]
    got = cumulative_integral(rows)
    exact = (np.exp(2 * x) - 1) / 2
    assert np.max(np.abs(got - exact)) < {0: 1e-6, 1: 1e-8, 2: 1e-11}[order]


def test_cumulative_integral_odd_n():
    x = grid(33)
    got = cumulative_integral(np.cos(x))
    assert np.max(np.abs(got - np.sin(x))) < 1e-7


def test_antiderivative_initial_value_and_rows():
    f = SmoothFunction.sine(1.0).sample(128, 1)
    F = antiderivative(f, 0.25)
    assert F.values[0] == 0.25
    assert F.order == 2
    assert np.array_equal(F.derivs[0], f.values)
    assert np.allclose(F.values, 0.25 + 1 - np.cos(f.nodes), atol=1e-12)
    assert iota(f).values[0] == 0.0


def test_integration_needs_three_nodes():
    with pytest.raises(DomainError):
        cumulative_integral(np.ones(2))


def test_finite_difference_exact_for_quartics():
    p = SmoothFunction.polynomial([1.0, 2.0, -1.0, 0.5, 0.25])
    f = p.sample(20)
    d = finite_difference_derivative(f)
    assert np.allclose(d.values, p.jet(grid(20), 1)[1], atol=1e-10)


@given(st.floats(0.5, 6.0), st.floats(-2.0, 2.0))
def test_interpolant_matches_nodes(freq, phase):
    f = SmoothFunction.sine(freq, phase=phase).sample(40, 2)
    assert np.array_equal(interpolate_rows(f.rows, f.nodes, upto=0)[0], f.values)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=4))
def test_integral_then_derivative_round_trip(coefs):
    p = SmoothFunction.polynomial(coefs)
    f = p.sample(64, 2)
    F = antiderivative(f)
    assert np.allclose(finite_difference_derivative(F).values, f.values, atol=1e-8)
