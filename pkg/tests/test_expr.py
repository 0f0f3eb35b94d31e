import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bivapprox.expr import (Add, Const, DomainError, Func, Mul, NonConstantExponentError, ParseError,
                            Pow, UnknownIdentifierError, Var, differentiate, evaluate, evaluate_with,
                            free_variables, mixed_partial, node_count, parse, simplify, to_source)


def test_parse_product():
    assert parse("t*s") == Mul(Var("t"), Var("s"))


def test_parse_precedence():
    e = parse("t^2*s^2 + sin(t)")
    assert isinstance(e, Add)
    assert e.left == Mul(Pow(Var("t"), 2.0), Pow(Var("s"), 2.0))
    assert e.right == Func("sin", Var("t"))


@pytest.mark.parametrize("src, offset", [("t**", 2), ("(t", 2), ("t+", 2), ("", 0), ("sin t", 4)])
def test_parse_error_offset(src, offset):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.offset == offset


def test_parse_error_offset_is_bytes():
    with pytest.raises(ParseError) as info:
        parse("t+é")
    assert info.value.offset == 2
    with pytest.raises(ParseError) as info:
        parse("sin(é) + ")
    assert info.value.offset == 4


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError):
        parse("x*s")
    with pytest.raises(UnknownIdentifierError):
        parse("tan(t)")


def test_exponent_must_be_constant():
    with pytest.raises(NonConstantExponentError):
        parse("t^s")
    assert evaluate(parse("t^(1/2)"), 4.0, 0.0) == 2.0


def test_unary_minus_binds_looser_than_power():
    assert evaluate(parse("-t^2"), 3.0, 0.0) == -9.0
    assert evaluate(parse("2^-1"), 0.0, 0.0) == 0.5
    assert evaluate(parse("t^2^3"), 2.0, 0.0) == 256.0


def test_scientific_literals():
    assert evaluate(parse("1.5e-1*t"), 2.0, 0.0) == pytest.approx(0.3)


@pytest.mark.parametrize("src, var, expected", [
    ("t^2*s", "t", "2*t*s"),
    ("sin(t)*s", "t", "cos(t)*s"),
    ("3", "t", "0"),
])
def test_differentiate_examples(src, var, expected):
    assert to_source(differentiate(parse(src), var)) == expected


def test_mixed_partial_examples():
    assert to_source(mixed_partial(parse("t^2*s^2"), (1, 1))) == "4*t*s"
    assert to_source(mixed_partial(parse("t*s"), (2, 0))) == "0"


def test_evaluate_examples():
    assert evaluate(parse("t*s"), 0.5, 0.5) == 0.25
    assert evaluate(mixed_partial(parse("sin(t)*sin(s)"), (1, 1)), 0.0, 0.0) == 1.0


@pytest.mark.parametrize("src, t, s", [("ln(t)", 0.0, 1.0), ("sqrt(t)", -1.0, 0.0), ("1/t", 0.0, 0.0),
                                       ("t^0.5", -1.0, 0.0), ("t^-1", 0.0, 0.0)])
def test_domain_errors(src, t, s):
    with pytest.raises(DomainError):
        evaluate(parse(src), t, s)


def test_domain_error_carries_position():
    with pytest.raises(DomainError) as info:
        evaluate(parse("t + ln(s)"), 1.0, -1.0)
    assert info.value.pos == 4


def test_vectorised_evaluation_broadcasts():
    out = evaluate(parse("t*s + 1"), np.array([[0.0], [1.0]]), np.array([[1.0, 2.0]]))
    assert out.shape == (2, 2)
    np.testing.assert_array_equal(out, [[1.0, 1.0], [2.0, 3.0]])
    assert evaluate(parse("2"), np.zeros(3), np.zeros(3)).shape == (3,)


@pytest.mark.parametrize("p, q", [(p, q) for p in range(4) for q in range(4)])
def test_exp_is_its_own_mixed_partial(p, q):
    e = mixed_partial(parse("exp(t+s)"), (p, q))
    for t, s in [(0.1, 0.2), (0.7, -0.3), (1.5, 0.9)]:
        assert evaluate(e, t, s) == pytest.approx(math.exp(t + s), rel=1e-13)


def test_mixed_partials_commute():
    e = parse("sin(t*s) + exp(t)*s^3")
    a = mixed_partial(e, (2, 1))
    b = differentiate(differentiate(differentiate(e, "s"), "t"), "t")
    for t, s in [(0.3, 0.4), (1.2, -0.7)]:
        assert evaluate(a, t, s) == pytest.approx(evaluate(b, t, s), rel=1e-12)


def test_mixed_partial_matches_mpmath():
    mp.mp.dps = 40
    e = parse("sqrt(1+t^2)*ln(2+s)/(1+t*s)")
    for order in [(1, 0), (0, 2), (1, 1), (2, 2), (3, 1)]:
        exact = mp.diff(lambda t, s: evaluate_with(e, t, s, mp), (mp.mpf("0.4"), mp.mpf("0.3")), order)
        assert evaluate(mixed_partial(e, order), 0.4, 0.3) == pytest.approx(float(exact), rel=1e-12)


def test_simplify_folds_and_prunes():
    assert to_source(simplify(parse("0*t + 1*s + t^1 - 0"))) == "s+t"
    assert to_source(simplify(parse("2*3*t"))) == "6*t"
    assert simplify(parse("--t")) == Var("t")
    assert simplify(parse("t^0")) == Const(1.0)


def test_free_variables_and_size():
    assert free_variables(parse("sin(t) + 3")) == {"t"}
    assert node_count(parse("t*s")) == 3


# random expression trees for round-trip properties
_leaf = st.one_of(st.sampled_from([Var("t"), Var("s")]),
                  st.integers(-5, 5).map(lambda v: Const(float(v))),
                  st.sampled_from([Const(0.5), Const(2.25)]))


def _extend(children):
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Mul, children, children),
        st.builds(lambda a, b: parse(f"({to_source(a)}) - ({to_source(b)})"), children, children),
        st.builds(lambda a, k: Pow(a, float(k)), children, st.integers(0, 3)),
        st.builds(lambda a, f: Func(f, a), children, st.sampled_from(["sin", "cos"])),
    )


exprs = st.recursive(_leaf, _extend, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_to_source_round_trips(e):
    assert parse(to_source(e)) == e


@settings(max_examples=100, deadline=None)
@given(exprs, st.floats(-2, 2), st.floats(-2, 2))
def test_simplify_preserves_value(e, t, s):
    a, b = evaluate(e, t, s), evaluate(simplify(e), t, s)
    assert b == pytest.approx(a, rel=1e-9, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(exprs, st.floats(-1, 1), st.floats(-1, 1))
def test_derivative_matches_mpmath(e, t, s):
    mp.mp.dps = 40
    exact = mp.diff(lambda u: evaluate_with(e, u, mp.mpf(s), mp), mp.mpf(t))
    got = evaluate(differentiate(e, "t"), t, s)
    assert got == pytest.approx(float(exact), rel=1e-9, abs=1e-9)
