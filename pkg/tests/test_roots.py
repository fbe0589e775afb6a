from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from adequal.errors import NoBracket, NotRepresentable
from adequal.notation import parse_function
from adequal.roots import (Polynomial, cauchy_bisect, sqrt2_oracle, stevin_root, truncated_decimal)

F = Fraction
SQRT2 = Polynomial([-2, 0, 1])
CBRT2 = Polynomial([-2, 0, 0, 1])

# truncated reference digits, computed independently with mpmath at 60 digits
SQRT2_REF = "1.4142135623730950488"
CBRT2_REF = "1.2599210498948731647"


def test_polynomial_basics():
    p = Polynomial.from_expr(parse_function("(x - 1)*(x + 2) + 0*x^5"))
    assert p.coeffs == (F(-2), F(1), F(1)) and p.degree == 2
    assert p.derivative() == Polynomial([1, 2])
    assert p(F(1, 2)) == F(-5, 4)
    assert str(Polynomial([F(1, 2), -1, 0, 3])) == "3*x^3 - x + 1/2"
    with pytest.raises(NotRepresentable):
        Polynomial.from_expr(parse_function("1/x"))
    with pytest.raises(NotRepresentable):
        Polynomial.from_expr(parse_function("sin(x)"))


def test_stevin_examples():
    assert stevin_root(SQRT2, 1, 2, 6).text() == "1.414213"
    assert stevin_root(CBRT2, 1, 2, 6).text() == "1.259921"
    half = stevin_root(Polynomial([F(-1, 2), 1]), 0, 1, 3)
    assert half.text() == "0.500"
    assert half.exact_root == F(1, 2) and half.steps[0].exact_zero and len(half.steps) == 1


def test_stevin_no_bracket():
    with pytest.raises(NoBracket):
        stevin_root(SQRT2, 2, 3, 4)
    with pytest.raises(NoBracket):
        stevin_root(Polynomial([5]), 0, 1, 4)
    with pytest.raises(NoBracket):
        stevin_root(SQRT2, 2, 1, 4)


def test_stevin_multiple_sign_changes_take_leftmost():
    q = Polynomial.from_expr(parse_function("(x - 1/7)*(x - 3/7)*(x - 5/7)"))
    r = stevin_root(q, 0, 1, 4)
    assert r.steps[0].sign_changes == 3 and r.text() == "0.1428"
    assert "candidates=3" in r.certificate_lines()[0]


def test_certificate_lines():
    lines = stevin_root(SQRT2, 1, 2, 2).certificate_lines()
    assert lines == ["step 1: [7/5, 3/2] signs(−,+)", "step 2: [141/100, 71/50] signs(−,+)"]


def test_bisect_examples():
    t = cauchy_bisect(SQRT2, 1, 2, 20)
    assert t.width == F(1, 2 ** 20)
    a, b = t.final
    assert a * a < 2 < b * b
    assert cauchy_bisect(Polynomial([F(-1, 2), 1]), 0, 1, 1).exact_root == F(1, 2)
    t = cauchy_bisect(CBRT2, 1, 2, 40)
    assert truncated_decimal(*t.final, 10) == stevin_root(CBRT2, 1, 2, 10).text()


def test_ten_stevin_steps_match_33_halvings():
    s = stevin_root(SQRT2, 1, 2, 10).steps[-1].width
    assert F(1, 2 ** 34) < s < F(1, 2 ** 33)


def test_oracle_agrees_with_reference():
    lo, hi = sqrt2_oracle(50)
    assert hi - lo == F(1, 10 ** 50)
    assert lo * lo < 2 < hi * hi
    assert truncated_decimal(lo, hi, 19) == SQRT2_REF
    assert stevin_root(CBRT2, 1, 2, 19).text() == CBRT2_REF


@settings(max_examples=40, deadline=None)
@given(hs.lists(hs.integers(-9, 9), min_size=2, max_size=6).filter(lambda cs: cs[-1] != 0),
       hs.integers(-3, 2), hs.integers(1, 8))
def test_stevin_certificates_verify(cs, lo, digits):
    p = Polynomial(cs)
    hi = lo + 1
    if p(lo) * p(hi) >= 0:
        with pytest.raises(NoBracket):
            stevin_root(p, lo, hi, digits)
        return
    r = stevin_root(p, lo, hi, digits)
    width = F(hi - lo)
    for step in r.steps:
        assert step.width == width / 10 ** step.index
        if step.exact_zero:
            assert p(step.lo) == 0
        else:
            assert (p(step.lo) > 0) - (p(step.lo) < 0) == step.sign_lo
            assert (p(step.hi) > 0) - (p(step.hi) < 0) == step.sign_hi
            assert step.sign_lo * step.sign_hi < 0
    assert len(r.digits) == digits


@settings(max_examples=40, deadline=None)
@given(hs.lists(hs.integers(-9, 9), min_size=2, max_size=5).filter(lambda cs: cs[-1] != 0),
       hs.integers(-3, 2), hs.integers(1, 30))
def test_bisect_halves_each_step(cs, lo, steps):
    p = Polynomial(cs)
    if p(lo) * p(lo + 1) >= 0:
        return
    t = cauchy_bisect(p, lo, lo + 1, steps)
    for step in t.steps:
        assert step.width == F(1, 2 ** step.index)
        assert step.sign_lo * step.sign_hi < 0
