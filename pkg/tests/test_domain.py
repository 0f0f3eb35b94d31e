import numpy as np
import pytest
from hypothesis import given, strategies as st

from bivapprox.domain import (MAX_ORDER, DerivativeField, EvalPoint, GridPartition, MixedOrder, Rectangle,
                              axis_nodes, uniform_partition)


def test_rectangle_validation():
    with pytest.raises(ValueError):
        Rectangle(1, 0, 0, 1)
    with pytest.raises(ValueError):
        Rectangle(0, 1, 0, 0)
    with pytest.raises(ValueError):
        Rectangle(0, float("nan"), 0, 1)


def test_rectangle_geometry():
    Q = Rectangle(0, 2, 1, 4)
    assert (Q.width, Q.height, Q.area) == (2, 3, 6)
    assert Q.midpoint == EvalPoint(1, 2.5)
    assert len(Q.corners) == 4
    assert Q.contains(2, 4) and not Q.contains(2.1, 4)
    with pytest.raises(ValueError):
        Q.check(EvalPoint(-1, 2))
    left, right = Q.split_t(0.5)
    assert left.b == right.a == 0.5


def test_mixed_order_ceiling():
    MixedOrder(6, 6)
    with pytest.raises(ValueError):
        MixedOrder(7, 6)
    with pytest.raises(ValueError):
        MixedOrder(-1, 0)
    assert tuple(MixedOrder(1, 2).shifted()) == (2, 3)
    assert MAX_ORDER == 12


def test_uniform_partition_examples(unit):
    P = uniform_partition(unit, 1, 1)
    np.testing.assert_array_equal(P.t_nodes, [0, 1])
    np.testing.assert_array_equal(P.s_nodes, [0, 1])
    P = uniform_partition(unit, 2, 2)
    np.testing.assert_array_equal(P.t_nodes, [0, 0.5, 1])
    with pytest.raises(ValueError):
        uniform_partition(unit, 0, 1)


def test_partition_validation_and_refine(unit):
    with pytest.raises(ValueError):
        GridPartition([0, 0.5, 0.5, 1], [0, 1])
    with pytest.raises(ValueError):
        GridPartition([0], [0, 1])
    P = uniform_partition(unit, 2, 3).refine()
    assert P.shape == (4, 6)
    assert P.covers(unit)
    with pytest.raises(ValueError):
        P.t_nodes[0] = 5.0


@given(st.floats(0.01, 0.99), st.integers(1, 8))
def test_axis_nodes_contain_breaks(x, cells):
    nodes = axis_nodes(0.0, 1.0, cells, (x,))
    assert x in nodes
    assert nodes[0] == 0.0 and nodes[-1] == 1.0
    assert np.all(np.diff(nodes) > 0)


def test_derivative_field():
    f = DerivativeField.from_source("t^3*s^2")
    assert f(2.0, 3.0) == 72.0
    assert f(2.0, 3.0, order=(1, 1)) == 3 * 4 * 2 * 3
    assert f.partial((1, 1)) is f.partial(MixedOrder(1, 1))
    np.testing.assert_allclose(f.evaluator((2, 0))(np.array([1.0, 2.0]), 1.0), [6.0, 12.0])
