from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from adequal.errors import TruncationError, Unlimited, ZeroInput
from adequal.lcfield import (EPS, H, ONE, ZERO, LCNumber, Magnitude, TruncationOrder, adequal,
                             check_transfer_identity, check_transfer_schema, classify, cmp, div,
                             factor_leading, inv, leading_order, mul, power, sin, cos, sqrt, st)
from _strategies import lc_numbers, limited, nonzero

F = Fraction


def lc(*terms):
    return LCNumber(terms)


def test_canonical_form_drops_zeros_and_sorts():
    a = lc((2, 1), (0, 3), (1, 0), (2, -1))
    assert a.terms == ((F(0), F(3)),)
    assert lc((1, 1), (0, 1)).terms == ((F(0), F(1)), (F(1), F(1)))


def test_floats_rejected():
    with pytest.raises(TypeError):
        LCNumber.const(0.5)


def test_add_examples():
    assert (ONE - EPS) + EPS == ONE
    assert ZERO + H == H
    assert lc((0, 2), (1, 3)) + lc((0, 1), (2, -1)) == lc((0, 3), (1, 3), (2, -1))


def test_mul_examples():
    assert mul(3 * EPS, 2 * H) == LCNumber.const(6)
    assert EPS * H == ONE
    assert (ONE - EPS) ** 2 == ONE - 2 * EPS + EPS * EPS


def test_inv_examples():
    assert inv(LCNumber.const(2)) == LCNumber.const(F(1, 2))
    assert inv(EPS) == H
    r = inv(ONE + EPS, 3)
    assert r == ONE - EPS + EPS ** 2 - EPS ** 3
    assert r.order == 3
    residual = (ONE + EPS) * r - ONE
    assert residual.terms == ((F(4), F(-1)),)


def test_inv_zero():
    with pytest.raises(ZeroInput):
        inv(ZERO)
    with pytest.raises(ZeroDivisionError):
        div(ONE, ZERO)


def test_cmp_examples():
    assert EPS < LCNumber.const(F(1, 1000))
    assert ONE - EPS < ONE
    assert H > LCNumber.const(10 ** 6)
    assert cmp(EPS, EPS) == 0


def test_st_examples():
    assert st(2 - EPS) == 2
    assert st(LCNumber.const(5)) == 5
    with pytest.raises(Unlimited):
        st(H)


def test_st_refuses_imprecise_values():
    with pytest.raises(TruncationError):
        st(LCNumber([(1, 1)], order=F(-1)))


def test_adequal_examples():
    x, dx = LCNumber.const(5), EPS
    assert adequal(2 * x + dx, 2 * x)
    assert adequal(H, H)
    assert not adequal(ONE, LCNumber.const(2))


def test_classify_examples():
    assert classify(EPS + EPS ** 2) is Magnitude.INFINITESIMAL
    assert classify(3 + EPS) is Magnitude.APPRECIABLE
    assert classify(H + 7) is Magnitude.UNLIMITED
    assert classify(ZERO) is Magnitude.ZERO


def test_leading_order_examples():
    assert leading_order(3 * EPS ** 2 - EPS ** 3) == (3, 2)
    assert leading_order(LCNumber.const(7)) == (7, 0)
    assert leading_order(-H) == (-1, -1)
    with pytest.raises(ZeroInput):
        leading_order(ZERO)


def test_factor_leading_reassembles():
    a = 3 * EPS ** 2 - EPS ** 3 + 5 * EPS ** 4
    k, n, u = factor_leading(a)
    assert classify(u) in (Magnitude.INFINITESIMAL, Magnitude.ZERO)
    assert LCNumber.monomial(k, n) * (ONE + u) == a


def test_canonical_text():
    a = lc((-1, F(3, 2)), (0, 2), (F(1, 2), -1), (3, F(-7, 4)))
    assert str(a) == "3/2*eps^-1 + 2 - 1*eps^(1/2) - 7/4*eps^3"
    assert str(ZERO) == "0"
    assert str(-EPS) == "-1*eps^1"


def test_truncation_order_positive():
    with pytest.raises(ValueError):
        TruncationOrder(F(0))
    assert TruncationOrder.of(None).max_exponent == 8


def test_power_rational_and_negative():
    a = 4 * (ONE + EPS)
    root = power(a, F(1, 2), 3)
    diff = (root * root - a).with_order(None)
    assert diff.is_zero() or diff.valuation > 3
    r = power(ONE + EPS, F(1, 2), 4)
    assert r.coefficient(1) == F(1, 2) and r.coefficient(2) == F(-1, 8)
    assert power(EPS, -2) == H * H


def test_elementary_taylor():
    s = sin(EPS, 5)
    assert s.coefficient(1) == 1 and s.coefficient(3) == F(-1, 6) and s.coefficient(5) == F(1, 120)
    c = cos(EPS, 4)
    assert c.coefficient(0) == 1 and c.coefficient(2) == F(-1, 2)
    assert sqrt(LCNumber.const(F(9, 4))) == LCNumber.const(F(3, 2))


def test_transfer_examples():
    assert check_transfer_identity("distributive", [(EPS, H, LCNumber.const(3))]).holds
    assert check_transfer_identity("order-translation", [(EPS, 2 * EPS, H)]).holds


def test_transfer_reports_failures():
    from adequal.lcfield import TransferIdentity
    bogus = TransferIdentity("sub-commutative", "x - y = y - x", lambda x, y, z: x - y == y - x)
    report = check_transfer_identity(bogus, [(EPS, ONE, ZERO)])
    assert not report.holds and report.violations[0][0] == "sub-commutative"


# -- properties ------------------------------------------------------------

@given(lc_numbers(), lc_numbers(), lc_numbers())
def test_field_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert a + (-a) == ZERO


@given(nonzero, hs.sampled_from([F(1), F(3), F(8), F(5, 2)]))
def test_inverse_residual_exceeds_order(a, k):
    r = inv(a, k)
    residual = (a * r - ONE).with_order(None)
    assert residual.is_zero() or residual.valuation > k


@given(lc_numbers(), lc_numbers(), lc_numbers())
def test_cmp_total_and_compatible(a, b, c):
    assert cmp(a, b) == -cmp(b, a)
    assert (cmp(a, b) == 0) == (a == b)
    if a < b and b < c:
        assert a < c
    if a < b:
        assert a + c < b + c
        if c > ZERO:
            assert a * c < b * c


@given(limited, limited)
def test_st_homomorphism(a, b):
    assert st(a + b) == st(a) + st(b)
    assert st(a * b) == st(a) * st(b)


@given(limited, limited, limited)
def test_adequal_equivalence(a, b, c):
    assert adequal(a, a)
    assert adequal(a, b) == adequal(b, a)
    if adequal(a, b) and adequal(b, c):
        assert adequal(a, c)
    assert adequal(a, b) == (st(a - b) == 0)


@given(lc_numbers())
def test_classify_matches_rational_ladder(a):
    ladder = [F(1, 10 ** k) for k in range(0, 30, 3)]
    if a.terms and a.valuation <= 0:
        # half the leading coefficient is a positive rational that |a| exceeds
        ladder.append(abs(a.terms[0][1]) / 2)
    below_all = all(abs(a) < LCNumber.const(r) for r in ladder)
    assert below_all == (classify(a) in (Magnitude.INFINITESIMAL, Magnitude.ZERO))


@settings(max_examples=50)
@given(hs.lists(hs.tuples(lc_numbers(), lc_numbers(), lc_numbers()), min_size=1, max_size=20))
def test_transfer_schema_holds(samples):
    assert check_transfer_schema(samples).holds


@given(lc_numbers())
def test_hash_consistent_with_eq(a):
    b = LCNumber(a.terms)
    assert a == b and hash(a) == hash(b)
