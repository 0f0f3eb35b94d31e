import math

import numpy as np
import pytest

from bivapprox.univariate import d_poly, e_remainder, parse_1d, phi_bounds, phi_defect


def test_parse_1d():
    assert parse_1d("x^2")(3.0, 0.0) == 9.0
    with pytest.raises(ValueError):
        parse_1d("x*s")


def test_phi_defect_examples():
    assert phi_defect("2*x + 1", 0.3, (0, 1)) == pytest.approx(0.0, abs=1e-15)
    assert phi_defect("x^2", 0.5, (0, 1)) == 0.25
    assert phi_defect("sin(x)", 0.0, (0, 1)) == 0.0
    with pytest.raises(ValueError):
        phi_defect("x", 2.0, (0, 1))


@pytest.mark.parametrize("x", [0.0, 0.2, 0.5, 0.9, 1.0])
def test_phi_bounds_identity(x):
    b = phi_bounds("x", x, (0, 1))
    assert b.b1 == pytest.approx(2 * x * (1 - x), abs=1e-12)
    assert b.midpoint_branch == pytest.approx(0.5 + abs(x - 0.5), abs=1e-12)
    assert b.max_branch == pytest.approx(0.5 + abs(2 * x - 1) / 2, abs=1e-12)


def test_phi_bounds_midpoint():
    b = phi_bounds("sin(3*x)", 0.5, (0, 1))
    v = b.midpoint_branch * 2
    assert b.midpoint_branch == pytest.approx(v / 2)


@pytest.mark.parametrize("x", np.linspace(0, 1, 21))
def test_phi_chain_for_square(x):
    b = phi_bounds("x^2", x, (0, 1))
    slack = 1 + 1e-9
    assert abs(phi_defect("x^2", x, (0, 1))) <= b.b1 * slack + 1e-15
    for branch in b.branches:
        assert b.b1 <= branch * slack + 1e-15


def test_d_poly_examples():
    assert d_poly("exp(x)", 0, 0.3, (0, 1)) == pytest.approx(0.7 + 0.3 * math.e)
    assert d_poly("exp(x)", 3, 0.0, (0, 1)) == 1.0
    assert d_poly("exp(x)", 3, 1.0, (0, 1)) == pytest.approx(math.e)
    assert d_poly("x^2", 1, 0.5, (0, 1)) == 0.0


@pytest.mark.parametrize("n", range(4))
def test_linear_function(n):
    assert d_poly("3*x - 1", n, 0.4, (0, 2)) == pytest.approx(0.2, abs=1e-14)
    r = e_remainder("3*x - 1", n, 0.4, (0, 2))
    assert r.value == pytest.approx(0.0, abs=1e-14)


def test_polynomial_of_degree_at_most_n_has_zero_remainder():
    assert e_remainder("x^3", 3, 0.3, (0, 1)).value == 0.0


@pytest.mark.parametrize("f", ["x^2", "sin(x)", "exp(x)"])
@pytest.mark.parametrize("n", [0, 1])
def test_low_order_representation(f, n):
    # the zero- and first-order representations close exactly
    for x in (0.2, 0.5, 0.85):
        r = e_remainder(f, n, x, (0, 1))
        assert r.converged and abs(r.residual) < 1e-10


def test_zero_order_remainder_closed_form():
    r = e_remainder("x^2", 0, 0.5, (0, 1))
    # int S_0 d f = (b-x)(f(x)-f(a)) - (x-a)(f(b)-f(x))
    assert r.value == pytest.approx(0.5 * 0.25 - 0.5 * 0.75, rel=1e-12)


@pytest.mark.parametrize("f", ["sin(3*x)", "exp(x)", "x^5 - x"])
@pytest.mark.parametrize("n", range(2, 6))
def test_printed_kernel_leaves_a_residual_that_factorial_scaling_removes(f, n):
    printed = e_remainder(f, n, 0.7, (0, 2))
    scaled = e_remainder(f, n, 0.7, (0, 2), factorial_scaling=True)
    assert scaled.converged and abs(scaled.residual) < 1e-11
    assert scaled.value == pytest.approx(printed.value / math.factorial(n), rel=1e-12, abs=1e-14)
    if f != "x^5 - x" or n < 5:
        assert abs(printed.residual) > 1e-3
