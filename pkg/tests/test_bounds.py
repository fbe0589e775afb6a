from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as hs

from adequal.bounds import irr_gap, sweep
from adequal.errors import OutOfRange
from adequal.roots import sqrt2_oracle

F = Fraction
# smallest 3n^2|sqrt(2) - m/n| over 1 <= m/n <= 3/2, n <= 1000, from mpmath at 60 digits
MIN_RATIO_1000 = "1.02943725152285941437"


def test_examples():
    assert str(irr_gap(7, 5)) == "gap=1 bound=1/75 verified=true"
    c = irr_gap(1, 1)
    assert (c.integer_gap, c.lower_bound, c.verified) == (1, F(1, 3), True)
    c = irr_gap(3, 2)
    assert (c.integer_gap, c.lower_bound, c.verified) == (1, F(1, 12), True)


def test_oracle_distances():
    lo, hi = sqrt2_oracle()
    assert lo - F(7, 5) > F(1, 75) and lo - F(7, 5) < F(142136, 10 ** 7)
    assert lo - 1 > F(1, 3)
    assert F(3, 2) - hi > F(1, 12)


def test_out_of_range():
    with pytest.raises(OutOfRange):
        irr_gap(8, 5)
    with pytest.raises(OutOfRange):
        irr_gap(0, 5)
    with pytest.raises(OutOfRange):
        sweep(0)


def test_small_sweeps():
    one = sweep(1)
    assert one.pairs == 1 and one.verified and one.argmin == (1, 1)
    ten = sweep(10)
    assert ten.verified and not ten.failures


def test_min_ratio_is_a_certified_lower_bound():
    s = sweep(1000)
    assert s.verified and s.argmin == (3, 2)
    assert abs(s.min_ratio - F(MIN_RATIO_1000)) < F(1, 10 ** 20)


@given(hs.integers(1, 10 ** 6), hs.data())
def test_gap_certificate_properties(n, data):
    m = data.draw(hs.integers(n, 3 * n // 2))
    c = irr_gap(m, n)
    assert c.integer_gap >= 1 and c.verified
    assert c.lower_bound == F(1, 3 * n * n)
    assert dict(c.checks)["parity"]
