import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apne import interval as iv
from apne.interval import Interval


def test_ln2_and_exp1():
    l2 = iv.ln2()
    assert l2.lo < F(math.log(2)) + F(1, 10 ** 15) and l2.hi > F(math.log(2)) - F(1, 10 ** 15)
    assert l2.width < F(1, 2 ** 90)
    e = iv.exp_of(F(1))
    # e = 2.71828182845904523536028...
    assert e.lo <= F(271828182845904523537, 10 ** 20)
    assert e.hi >= F(271828182845904523536, 10 ** 20)


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=F(1, 1000), max_value=F(10 ** 6)))
def test_log_exp_enclose_float_values(x):
    lg = iv.log_of(x)
    ref = math.log(x)
    slack = F(1e-12) * max(1, abs(ref))
    assert lg.lo <= F(ref) + slack
    assert lg.hi >= F(ref) - slack
    back = iv.exp(lg)
    assert back.lo <= x <= back.hi


def test_log_exact_points():
    # ln 1 = 0 and ln 8 = 3 ln 2 must be enclosed.
    assert 0 in iv.log_of(F(1))
    l8, l2 = iv.log_of(F(8)), iv.ln2()
    assert l8.lo <= 3 * l2.hi and 3 * l2.lo <= l8.hi


def test_sqrt_and_three_pow_half():
    r = iv.sqrt_of(F(2))
    assert r.lo ** 2 <= 2 <= r.hi ** 2
    assert iv.three_pow_half(4) == Interval.point(9)
    t = iv.three_pow_half(9)
    # 3^4.5 = sqrt(19683) lies in (140.29, 140.30)
    assert F(14029, 100) < t.lo <= t.hi < F(14030, 100)
    assert t.lo ** 2 <= 3 ** 9 <= t.hi ** 2


def test_power_encloses_root():
    p = iv.power(F(16), F(1, 4))
    assert 2 in p
    assert p.width < F(1, 10 ** 20)


def test_certified_rounding():
    assert iv.certified_floor(Interval(F(5, 2), F(11, 4))) == 2
    assert iv.certified_ceil(Interval(F(5, 2), F(11, 4))) == 3
    with pytest.raises(ArithmeticError):
        iv.certified_floor(Interval(F(19, 10), F(21, 10)))


def test_interval_arithmetic_is_outward():
    a = Interval(F(1), F(2))
    b = Interval(F(-1), F(3))
    assert (a * b).lo <= -2 and (a * b).hi >= 6
    assert (a / Interval(F(2), F(4))).lo <= F(1, 4)
    with pytest.raises(ZeroDivisionError):
        a / b
    assert Interval(F(1), F(2)) < Interval(F(3), F(4))
    assert not Interval(F(1), F(3)) < Interval(F(2), F(4))
