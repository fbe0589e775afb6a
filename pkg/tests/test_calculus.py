from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from adequal.calculus import (ContinuityClass, Interval, Verdict, classify_continuity, derivative_at,
                              microcontinuous_at, wallis_area)
from adequal.errors import (DomainViolation, InconsistentDerivative, NotAdequal, Unlimited, ZeroInput)
from adequal.germ import germ_is_infinitesimal, germ_st
from adequal.lcfield import EPS, H, ZERO, LCNumber, Magnitude, classify, st
from adequal.notation import parse_function, parse_rule
from adequal.roots import Polynomial

from _strategies import coefficients, rationals

F = Fraction
INCREMENTS = [EPS, -EPS, EPS * EPS, 3 * EPS]


def test_derivative_examples():
    assert derivative_at(parse_function("x^2"), 1, -EPS) == 2
    assert derivative_at(parse_function("7"), F(5, 3), EPS) == 0
    assert derivative_at(parse_function("x^3"), 2, EPS) == 12


# reference values from a computer algebra system
SYMBOLIC = [
    ("x^5 - 3*x^2 + 1/2", F(-2, 3), F(404, 81)),
    ("(x^2 + 1)^4", F(1, 3), F(8000, 2187)),
    ("sin(x)", 0, 1),
    ("x*cos(x)", 0, 1),
    ("sqrt(x)", 4, F(1, 4)),
    ("1/x", 2, F(-1, 4)),
    ("1/(1 + x^2)", 1, F(-1, 2)),
]


@pytest.mark.parametrize("text,x0,expected", SYMBOLIC)
def test_derivative_matches_symbolic_reference(text, x0, expected):
    assert derivative_at(parse_function(text), x0, INCREMENTS) == expected


def test_derivative_errors():
    with pytest.raises(ZeroInput):
        derivative_at(parse_function("x^2"), 1, ZERO)
    with pytest.raises(ZeroDivisionError):
        derivative_at(parse_function("x^2"), 1, ZERO)
    with pytest.raises(ValueError):
        derivative_at(parse_function("x^2"), 1, LCNumber.const(1))
    with pytest.raises(Unlimited):
        derivative_at(parse_function("sqrt(x)"), 0, EPS)
    with pytest.raises(DomainViolation):
        derivative_at(parse_function("1/x"), 0, EPS)


def test_inconsistent_increments():
    # |x| is not in the expression language; sqrt(x^2) plays its part
    f = parse_function("sqrt(x^2)")
    with pytest.raises(InconsistentDerivative):
        derivative_at(f, 0, [EPS, -EPS])


polynomials = hs.lists(coefficients, min_size=1, max_size=9).map(Polynomial)


@settings(max_examples=60, deadline=None)
@given(polynomials, rationals)
def test_derivative_equals_formal_derivative(p, x0):
    fn = parse_function(str(p))
    expected = sum(i * c * x0 ** (i - 1) for i, c in enumerate(p.coeffs) if i)
    assert derivative_at(fn, x0, INCREMENTS) == expected


@settings(max_examples=40, deadline=None)
@given(polynomials, polynomials, rationals)
def test_sum_and_product_rules(p, q, x0):
    f, g = parse_function(str(p)), parse_function(str(q))
    df, dg = derivative_at(f, x0, EPS), derivative_at(g, x0, EPS)
    assert derivative_at(f + g, x0, EPS) == df + dg
    assert derivative_at(f * g, x0, EPS) == df * g(x0) + f(x0) * dg


def test_microcontinuity_examples():
    r = microcontinuous_at(parse_function("3*x"), EPS, [EPS + EPS * EPS])
    assert r.verdict is Verdict.MICROCONTINUOUS
    r = microcontinuous_at(parse_function("x^2"), H, [H + 1 / H])
    assert r.verdict is Verdict.FAILS
    assert r.gap == 2 + EPS * EPS and st(r.gap) == 2
    assert r.to_record() == "fails | 1*eps^-1 | 1*eps^-1 + 1*eps^1 | 2 + 1*eps^2"
    r = microcontinuous_at(parse_function("sin(1/x)"), parse_rule("1/(2*pi*n)"), [parse_rule("1/(2*pi*n + pi/2)")])
    assert r.verdict is Verdict.FAILS and r.exact and germ_st(r.gap) == 1


def test_microcontinuity_routes_to_germs():
    r = microcontinuous_at(parse_function("sin(1/x)"), EPS, [2 * EPS])
    assert r.verdict is Verdict.FAILS and not r.exact
    r = microcontinuous_at(parse_function("sin(x)"), H, [H + EPS])
    assert r.verdict is Verdict.MICROCONTINUOUS


def test_microcontinuity_rejects_distant_witness():
    with pytest.raises(NotAdequal):
        microcontinuous_at(parse_function("x"), EPS, [LCNumber.const(1)])
    with pytest.raises(DomainViolation):
        microcontinuous_at(parse_function("1/x"), EPS, [ZERO])


def test_interval_parsing():
    assert Interval.parse("(0,1)") == Interval(F(0), F(1))
    assert Interval.parse("[0, inf)") == Interval(F(0), None, True, False)
    assert Interval.parse("(0,∞)") == Interval(F(0), None)
    assert Interval.parse("(-oo, 1/2]") == Interval(None, F(1, 2), False, True)
    assert len(Interval.parse("[0,1]").grid()) == 11
    assert len(Interval.parse("(0,1)").grid()) == 9
    with pytest.raises(ValueError):
        Interval.parse("[0, inf]")
    with pytest.raises(ValueError):
        Interval.parse("(1, 0)")


def test_classification_examples():
    assert classify_continuity(parse_function("x^2"), Interval.parse("(0,1)")).classification \
        is ContinuityClass.UNIFORMLY_CONTINUOUS
    res = classify_continuity(parse_function("x^2"), Interval.parse("(0,inf)"))
    assert res.classification is ContinuityClass.CONTINUOUS
    assert st(res.deciding[0].gap) == 2
    res = classify_continuity(parse_function("sin(1/x)"), Interval.parse("(0,1)"))
    assert res.classification is ContinuityClass.CONTINUOUS
    assert res.deciding[0].exact and abs(germ_st(res.deciding[0].gap)) == 1


def test_classification_of_other_shapes():
    assert classify_continuity(parse_function("1/x"), "(0,1)").classification is ContinuityClass.CONTINUOUS
    assert classify_continuity(parse_function("sqrt(x)"), "[0,inf)").classification \
        is ContinuityClass.UNIFORMLY_CONTINUOUS
    assert classify_continuity(parse_function("sin(x)"), "(-inf,inf)").classification \
        is ContinuityClass.UNIFORMLY_CONTINUOUS
    with pytest.raises(DomainViolation):
        classify_continuity(parse_function("1/x"), "[0,1]")


@settings(max_examples=25, deadline=None)
@given(polynomials, hs.integers(-3, 3), hs.integers(1, 3))
def test_polynomials_on_closed_intervals_are_uniformly_continuous(p, a, width):
    res = classify_continuity(parse_function(str(p)), Interval(F(a), F(a + width), True, True))
    assert res.classification is ContinuityClass.UNIFORMLY_CONTINUOUS


@settings(max_examples=10, deadline=None)
@given(hs.sampled_from(["x^2", "x^3 - x", "1/x", "sin(1/x)", "x*sin(1/x)", "sqrt(x)"]),
       hs.sampled_from(["(0,1)", "(0,inf)", "[1,2]", "(1/2,3/2)"]))
def test_every_failure_is_witnessed(text, domain):
    res = classify_continuity(parse_function(text), domain)
    for r in res.reports:
        if r.verdict is Verdict.FAILS:
            if isinstance(r.gap, LCNumber):
                assert classify(r.gap) in (Magnitude.APPRECIABLE, Magnitude.UNLIMITED)
            else:
                assert germ_is_infinitesimal(r.gap) is False


def test_wallis_examples():
    assert wallis_area(3, 4).area == 6
    assert wallis_area(1, 1).area == F(1, 2)
    r = wallis_area(F(2, 3), 5)
    assert r.area == F(5, 3)
    assert r.product.is_standard() and "exponents: 1 + -1 = 0" in r.certificate
    with pytest.raises(ValueError):
        wallis_area(0, 1)
