import math

import numpy as np
import pytest

from bivapprox.domain import Rectangle
from bivapprox.rs_quad import (check_integration_by_parts, grid_sup, integration_by_parts_cross_term,
                               lebesgue_double_integral, lemma3_audit, rs_double_integral)
from conftest import field


def test_constant_integrand_telescopes(unit):
    alpha = lambda t, s: np.sin(3 * t) * np.exp(s)
    est = rs_double_integral(1.0, alpha, unit)
    exact = (math.sin(3) - 0) * (math.e - 1)
    for v in est.levels:
        assert v == pytest.approx(exact, rel=1e-13)


def test_bilinear_integrator_gives_lebesgue_integral(unit):
    est = rs_double_integral(lambda t, s: t + s, lambda t, s: t * s, unit)
    assert est.converged and est.value == pytest.approx(1.0, rel=1e-12)


def test_product_integrator(unit):
    est = rs_double_integral(1.0, lambda t, s: t ** 2 * s, unit)
    assert est.value == pytest.approx(1.0, rel=1e-12)
    est = rs_double_integral(lambda t, s: np.cos(t * s), field("t^2*s"), unit, tol=1e-10)
    ref = lebesgue_double_integral(lambda t, s: np.cos(t * s) * 2 * t, unit).value
    assert est.converged and est.value == pytest.approx(ref, rel=1e-9)


def test_breaks_handle_a_step_integrand(unit):
    step = lambda t, s: np.where(t <= 0.3, 1.0, 0.0) * np.where(s <= 0.6, 1.0, 0.0)
    est = rs_double_integral(step, lambda t, s: t * s, unit, t_breaks=(0.3,), s_breaks=(0.6,))
    assert est.value == pytest.approx(0.18, rel=1e-12)


@pytest.mark.parametrize("h, expected", [
    (lambda t, s: 1.0 + 0 * t * s, 1.0),
    (lambda t, s: t ** 2 * s ** 2, 1 / 9),
    (lambda t, s: np.abs(1 - 2 * t) * np.abs(1 - 2 * s), 0.25),
])
def test_lebesgue_examples(unit, h, expected):
    est = lebesgue_double_integral(h, unit)
    assert est.converged and est.value == pytest.approx(expected, rel=1e-10)


def test_integration_by_parts_with_constant(unit):
    assert check_integration_by_parts(field("2"), field("t*s"), unit) <= 1e-12


@pytest.mark.parametrize("f, alpha", [("t*s", "t*s"), ("sin(t)*s", "t*s^2"), ("exp(t+s)", "t^2*s^2")])
def test_integration_by_parts_defect_is_the_cross_term(unit, f, alpha):
    # The measured defect equals the product-rule cross term; it is not zero.
    f, alpha = field(f), field(alpha)
    defect = check_integration_by_parts(f, alpha, unit, tol=1e-10, max_levels=12)
    cross = integration_by_parts_cross_term(f, alpha, unit)
    assert defect == pytest.approx(abs(cross), rel=1e-6)
    assert defect > 0.1


def test_lemma3_examples(unit):
    integral, bound, holds = lemma3_audit(1.0, field("t*s"), unit)
    assert (integral, bound, holds) == (pytest.approx(1.0), pytest.approx(1.0), True)
    integral, bound, holds = lemma3_audit(field("t*s"), field("t*s"), unit)
    assert integral == pytest.approx(0.25) and bound == pytest.approx(1.0) and holds
    integral, bound, holds = lemma3_audit(field("sin(t)"), field("3"), unit)
    assert integral == 0.0 and bound == 0.0 and holds


def test_grid_sup_includes_extra_lines():
    Q = Rectangle(0, 1, 0, 1)
    g = lambda t, s: np.exp(-((t - 0.3001) ** 2 + (s - 0.7) ** 2) * 1e6)
    assert grid_sup(g, Q, 16) < 0.5
    assert grid_sup(g, Q, 16, (0.3001,), (0.7,)) == 1.0
