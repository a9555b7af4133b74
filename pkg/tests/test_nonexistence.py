import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apne import game as gm
from apne.nonexistence import (GadgetParams, appendix_g, asymptotic_check, asymptotic_params,
                               build_gadget, case_ratios, k_of, optimize_alpha)
from apne.oracle import enumerate_pne, nonexistence_threshold


def test_build_gadget_shape():
    g = build_gadget(GadgetParams(2, 1, 1, 1, 1))
    assert g.n == 2 and len(g.resources) == 4 and g.shape() == (2, 2)
    heavy, light = g.players
    assert heavy.weight == 1 and light.weight == 1
    assert heavy.strategies == (("a0", "a1"), ("b0", "b1"))
    assert light.strategies == (("a0", "b1"), ("a1", "b0"))


def test_heavy_and_lights_on_a_side_load():
    p = GadgetParams(3, 3, 2, F(1, 3), F(1, 2))
    g = build_gadget(p)
    # heavy on a-side, every light player on {a0, b_i}
    assert gm.load(g, (0, 0, 0, 0), "a0") == 1 + 3 * F(1, 3)


def test_case_ratios_examples():
    assert case_ratios(GadgetParams(2, 1, 1, 1, 1)) == (F(5, 3), F(3, 5))
    assert case_ratios(GadgetParams(2, 1, 1, 1, 0)) == (F(1, 2), F(2))


def test_zero_weight_has_ratios_but_no_game():
    p = GadgetParams(2, 1, 1, 0, F(1, 2))
    assert case_ratios(p) == (1, 2)
    with pytest.raises(ValueError):
        build_gadget(p)


def test_invalid_params():
    for bad in [(1, 1, 1, 1, 1), (2, 0, 1, 1, 1), (2, 1, 3, 1, 1), (2, 1, 1, 2, 1), (2, 1, 1, 1, -1)]:
        with pytest.raises(ValueError):
            GadgetParams(*bad)


@settings(max_examples=25, deadline=None)
@given(
    d=st.integers(2, 4),
    n=st.integers(1, 3),
    k=st.integers(1, 4),
    w=st.fractions(F(1, 20), 1, max_denominator=20),
    beta=st.fractions(0, 1, max_denominator=20),
)
def test_oracle_threshold_at_least_case_ratios(d, n, k, w, beta):
    p = GadgetParams(d, n, min(k, d), w, beta)
    lower = min(case_ratios(p))
    g = build_gadget(p)
    assert nonexistence_threshold(g) >= lower
    if lower > 1:
        below = (1 + lower) / 2 if lower != math.inf else F(10 ** 6)
        assert enumerate_pne(g, below).count == 0


@pytest.mark.parametrize("d,paper", [
    (2, 1.0540141790979473396),
    (4, 1.152889535629472211),
    (10, 1.347548347473695593),
])
def test_optimizer_reaches_plotted_values(d, paper):
    fp = optimize_alpha(d)
    assert fp.alpha_lower == min(case_ratios(fp.argmax))
    assert float(fp.alpha_lower) >= paper - 1e-3
    assert abs(float(fp.alpha_lower) - paper) <= 1e-3


def test_optimizer_value_confirmed_by_oracle():
    fp = optimize_alpha(3)
    assert fp.argmax.n == 1
    assert nonexistence_threshold(build_gadget(fp.argmax)) == fp.alpha_lower


def test_optimizer_monotone_small_d():
    values = [optimize_alpha(d).alpha_lower for d in range(2, 9)]
    assert values == sorted(values)


def test_k_of_and_params():
    assert k_of(16) == 2  # ceil(2.7726 / (2 * 1.0198))
    p = asymptotic_params(1000)
    assert 1 <= p.k <= p.d and 0 <= p.w <= 1 and 0 <= p.beta <= 1
    with pytest.raises(ValueError):
        asymptotic_params(3)


def test_asymptotic_bounds_hold_at_ten_thousand():
    check = asymptotic_check(10 ** 4)
    assert all(check.holds().values()), check.holds()


def test_appendix_g_enclosures():
    g3 = appendix_g(10 ** 3)
    g6 = appendix_g(10 ** 6)
    assert g6.hi < g3.lo
    for d in (10 ** 2, 10 ** 4, 10 ** 5):
        g = appendix_g(d)
        assert g.width <= F(1, 10 ** 6)
        assert 1 < g.lo and g.hi < 4
    with pytest.raises(ValueError):
        appendix_g(2)
