"""Expression algebra: parsing, simplification, differentiation, sampling."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from contactgeo import scalar
from contactgeo.errors import DivisionByZero, ExpressionError, ParseError
from contactgeo.scalar import (
    Rat, Sampler, ZERO, diff, evaluate, is_zero, parse, simplify, to_str,
)


def test_parse_round_trip():
    for text in ["x", "2*x + 1", "exp(-v)", "x*y - 3/2", "(x + y)^2",
                 "4*(y + z)", "v*v/2", "1/(1 + x^2)"]:
        e = parse(text)
        again = parse(to_str(e))
        assert to_str(simplify(e - again)) == "0"


def test_parse_rejects_garbage():
    for bad in ["", "2 +", "x y", "exp()", "1//2", "x^y", "@", "((x)"]:
        with pytest.raises(ParseError):
            parse(bad)


def test_simplify_is_idempotent():
    e = parse("(x + y)^2 - x^2 - 2*x*y - y^2")
    s = simplify(e)
    assert s == simplify(s)
    assert isinstance(s, Rat) and s.value == 0


def test_simplify_folds_exp_products():
    e = simplify(parse("exp(x) * exp(-x)"))
    assert isinstance(e, Rat) and e.value == 1


def test_evaluate_exact_rationals():
    e = parse("x^2/3 - y/2")
    v = evaluate(e, {"x": Fraction(1, 2), "y": Fraction(1, 3)})
    assert v == Fraction(1, 12) - Fraction(1, 6)
    assert isinstance(v, Fraction)


def test_evaluate_exp_goes_float():
    v = evaluate(parse("exp(2*x)"), {"x": Fraction(1, 2)})
    assert v == pytest.approx(math.e)


def test_evaluate_division_by_zero():
    with pytest.raises(DivisionByZero):
        evaluate(parse("1/x"), {"x": Fraction(0)})


def test_diff_known_values():
    assert to_str(diff(parse("x^3"), "x")) == "3*x^2"
    assert to_str(simplify(diff(parse("exp(-v)"), "v") + parse("exp(-v)"))) == "0"
    assert to_str(diff(parse("x*y"), "y")) == "x"
    assert to_str(diff(parse("y"), "x")) == "0"


def test_diff_quotient():
    e = parse("1/(1 + x)")
    d = simplify(diff(e, "x") + parse("1/(1 + x)^2"))
    s = Sampler(("x",), {"x": (0, 1)}, count=20)
    assert is_zero(d, s).is_zero


def test_is_zero_verdicts():
    s = Sampler(("x",), {"x": (-1, 1)}, count=20)
    assert is_zero(parse("x - x"), s).kind == "proved_zero"
    v = is_zero(parse("x^2 + 1"), s)
    assert v.kind == "non_zero"
    env, value = v.witness
    assert value >= 1


def test_is_zero_requires_sampler_for_open_terms():
    with pytest.raises(ExpressionError):
        is_zero(parse("x + 1"))


def test_sampler_determinism_and_margin():
    box = {"x": (-2, 2), "v": (Fraction(1, 2), 2)}
    s1 = Sampler(("x", "v"), box, nonvanish=(parse("v"),), seed=7, count=30)
    s2 = Sampler(("x", "v"), box, nonvanish=(parse("v"),), seed=7, count=30)
    assert s1.points() == s2.points()
    s3 = Sampler(("x", "v"), box, seed=8, count=30)
    assert s1.points() != s3.points()
    for env in s1.points():
        assert Fraction(-2) <= env["x"] <= Fraction(2)
        assert Fraction(1, 2) <= env["v"] <= Fraction(2)
        assert abs(env["v"]) > Fraction(1, 1000)


def test_sampler_points_are_exact_rationals():
    s = Sampler(("x",), {}, count=5)
    for env in s.points():
        assert isinstance(env["x"], Fraction)


# random polynomials over a fixed small alphabet
def polys():
    coeff = st.integers(min_value=-3, max_value=3)
    return st.lists(st.tuples(coeff, st.integers(0, 3), st.integers(0, 2)),
                    min_size=1, max_size=4).map(
        lambda terms: simplify(sum(
            (Rat(c) * scalar.pow_int(parse("x"), i) * scalar.pow_int(parse("y"), j)
             for c, i, j in terms), ZERO)))


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_diff_product_rule(p, q):
    lhs = diff(simplify(p * q), "x")
    rhs = diff(p, "x") * q + p * diff(q, "x")
    assert isinstance(simplify(lhs - rhs), Rat)
    assert simplify(lhs - rhs).value == 0


@given(polys(), st.integers(min_value=-5, max_value=5),
       st.integers(min_value=-5, max_value=5))
@settings(max_examples=60, deadline=None)
def test_simplify_preserves_value(p, a, b):
    env = {"x": Fraction(a, 7), "y": Fraction(b, 5)}
    assert evaluate(p, env) == evaluate(simplify(p * Rat(1)), env)
