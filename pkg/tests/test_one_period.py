import math

import pytest
from hypothesis import assume, given, strategies as st

from numeraire import (
    ArbitrageError,
    BinaryClaim,
    OneStepMarket,
    StructuralError,
    TwoAssetOneStep,
    martingale_probs,
    price_one_step,
    replication_weights,
    two_asset_price,
    two_asset_probs,
    two_asset_replication,
)
from oracles import solve_2x2

EX1 = OneStepMarket(x_fwd=101.0, x_up=104.0, x_dn=99.0, df=100 / 101)
EX1_CLAIM = BinaryClaim(3.0, 2.0)

prices = st.floats(1.0, 500.0)
payoffs = st.floats(-100.0, 100.0)


def test_example1_probabilities():
    p_up, p_dn = martingale_probs(EX1)
    assert p_up == pytest.approx(0.4, rel=1e-12)
    assert p_dn == pytest.approx(0.6, rel=1e-12)


def test_boundary_probability():
    assert martingale_probs(OneStepMarket(99.0, 104.0, 99.0)) == (0.0, 1.0)


def test_example2_step_probabilities():
    p_up, p_dn = martingale_probs(OneStepMarket(100 / 0.996, 102.0, 98.0))
    assert p_up == pytest.approx(0.6004, abs=5e-5)
    assert p_dn == pytest.approx(0.3996, abs=5e-5)


def test_degenerate_market():
    with pytest.raises(StructuralError):
        OneStepMarket(100.0, 100.0, 100.0)
    with pytest.raises(StructuralError):
        OneStepMarket(100.0, 101.0, 99.0, df=0.0)


@pytest.mark.parametrize("x_fwd", [105.0, 98.0])
def test_arbitrage_error_carries_value(x_fwd):
    with pytest.raises(ArbitrageError) as err:
        martingale_probs(OneStepMarket(x_fwd, 104.0, 99.0))
    assert err.value.value == pytest.approx((x_fwd - 99.0) / 5.0)


@pytest.mark.parametrize(
    "x_up, x_dn, v_up, v_dn, a_x, a_rf",
    [
        (104.0, 99.0, 3.0, 2.0, 0.2, -17.8),
        (110.0, 90.0, 10.0, 0.0, 0.5, -45.0),
        (104.0, 99.0, 7.5, 7.5, 0.0, 7.5),
    ],
)
def test_replication_weights(x_up, x_dn, v_up, v_dn, a_x, a_rf):
    m = OneStepMarket(100.0, x_up, x_dn)
    got = replication_weights(m, BinaryClaim(v_up, v_dn))
    assert got == pytest.approx((a_x, a_rf), rel=1e-12, abs=1e-12)
    assert got == pytest.approx(solve_2x2(x_up, 1.0, x_dn, 1.0, v_up, v_dn), rel=1e-12, abs=1e-12)


def test_example1_price():
    assert price_one_step(EX1, EX1_CLAIM) == pytest.approx(2.376237623762376, rel=1e-12)
    assert abs(price_one_step(EX1, EX1_CLAIM) - 2.38) <= 5e-3


def test_forward_on_asset_prices_to_spot():
    assert price_one_step(EX1, BinaryClaim(104.0, 99.0)) == pytest.approx(100.0, rel=1e-12)


def test_digital():
    assert price_one_step(EX1, BinaryClaim(1.0, 0.0)) == pytest.approx(0.396039603960396, rel=1e-12)


def test_constant_claim_is_discounted():
    assert price_one_step(EX1, BinaryClaim(5.0, 5.0)) == pytest.approx(5.0 * 100 / 101, rel=1e-12)


@pytest.mark.parametrize(
    "w0, w_up, w_dn, expected",
    [(1.00, 1.02, 0.98, 0.5), (0.98, 1.02, 0.98, 0.0), (1.01, 1.05, 1.00, 0.2)],
)
def test_two_asset_probs(w0, w_up, w_dn, expected):
    t = TwoAssetOneStep(w0, 1.0, w_up, w_dn, 1.0, 1.0)
    assert two_asset_probs(t) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_two_asset_structural_errors():
    with pytest.raises(StructuralError):
        TwoAssetOneStep(1.0, 1.0, 2.0, 1.0, 2.0, 1.0)  # same ratio in both states
    with pytest.raises(StructuralError):
        TwoAssetOneStep(1.0, 1.0, 2.0, 1.0, 0.0, 1.0)
    with pytest.raises(ArbitrageError):
        two_asset_probs(TwoAssetOneStep(1.1, 1.0, 1.05, 1.0, 1.0, 1.0))


def test_two_asset_riskless_y_reduces_to_example1():
    t = TwoAssetOneStep(100.0, 100 / 101, 104.0, 99.0, 1.0, 1.0)
    assert two_asset_price(t, EX1_CLAIM) == pytest.approx(2.376237623762376, rel=1e-12)


def test_two_asset_claim_on_x_is_x0():
    t = TwoAssetOneStep(95.0, 90.0, 120.0, 80.0, 100.0, 85.0)
    assert two_asset_price(t, BinaryClaim(120.0, 80.0)) == pytest.approx(95.0, rel=1e-12)


def test_two_asset_exchange_claim():
    t = TwoAssetOneStep(100.0, 100.0, 120.0, 90.0, 100.0, 100.0)
    assert two_asset_price(t, BinaryClaim(20.0, 0.0)) == pytest.approx(20 / 3, rel=1e-12)
    a_x, a_y = solve_2x2(120.0, 100.0, 90.0, 100.0, 20.0, 0.0)
    assert a_x * 100 + a_y * 100 == pytest.approx(20 / 3, rel=1e-12)


@st.composite
def markets(draw):
    x_dn = draw(prices)
    x_up = x_dn * draw(st.floats(1.001, 2.0))
    x_fwd = x_dn + draw(st.floats(0.01, 0.99)) * (x_up - x_dn)
    df = draw(st.floats(0.5, 1.0))
    return OneStepMarket(x_fwd, x_up, x_dn, df)


@given(markets(), payoffs, payoffs)
def test_replication_exact_and_duality(m, v_up, v_dn):
    c = BinaryClaim(v_up, v_dn)
    a_x, a_rf = replication_weights(m, c)
    scale = max(1.0, abs(v_up), abs(v_dn))
    assert a_x * m.x_up + a_rf == pytest.approx(v_up, rel=1e-12, abs=1e-12 * scale * m.x_up)
    assert a_x * m.x_dn + a_rf == pytest.approx(v_dn, rel=1e-12, abs=1e-12 * scale * m.x_up)
    via_replication = m.df * (a_x * m.x_fwd) + m.df * a_rf
    assert price_one_step(m, c) == pytest.approx(via_replication, rel=1e-12, abs=1e-11 * scale * m.x_up)


@given(markets())
def test_martingale_calibration(m):
    p_up, p_dn = martingale_probs(m)
    assert p_up + p_dn == 1.0
    assert p_up * m.x_up + p_dn * m.x_dn == pytest.approx(m.x_fwd, rel=1e-12)


@given(prices, st.floats(1.001, 2.0), st.floats(0.0, 3.0))
def test_no_arbitrage_window(x_dn, ratio, where):
    x_up = x_dn * ratio
    x_fwd = x_dn + where * (x_up - x_dn) / 1.5 - 0.5 * (x_up - x_dn)
    m = OneStepMarket(x_fwd, x_up, x_dn)
    p = (x_fwd - x_dn) / (x_up - x_dn)
    if x_dn < x_fwd < x_up:
        assert 0.0 < martingale_probs(m)[0] < 1.0
    elif p < 0.0 or p > 1.0:
        with pytest.raises(ArbitrageError):
            martingale_probs(m)


@given(markets(), payoffs, payoffs)
def test_two_asset_reduction(m, v_up, v_dn):
    c = BinaryClaim(v_up, v_dn)
    t = TwoAssetOneStep(m.x_fwd * m.df, m.df, m.x_up, m.x_dn, 1.0, 1.0)
    scale = max(1.0, abs(v_up), abs(v_dn))
    assert two_asset_price(t, c) == pytest.approx(price_one_step(m, c), rel=1e-12, abs=1e-12 * scale)


@st.composite
def two_asset_markets(draw):
    y0, y_up, y_dn = draw(prices), draw(prices), draw(prices)
    w_dn = draw(st.floats(0.2, 3.0))
    w_up = w_dn * draw(st.floats(1.01, 2.0))
    w0 = w_dn + draw(st.floats(0.01, 0.99)) * (w_up - w_dn)
    return TwoAssetOneStep(w0 * y0, y0, w_up * y_up, w_dn * y_dn, y_up, y_dn)


@given(two_asset_markets(), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_two_asset_price_matches_replication(t, f_up, f_dn):
    # homothetic claim: V/Y takes the value f in each state
    c = BinaryClaim(f_up * t.y_up, f_dn * t.y_dn)
    a_x, a_y = two_asset_replication(t, c)
    scale = max(t.x0, t.y0) * max(1.0, abs(f_up), abs(f_dn))
    assert a_x * t.x_up + a_y * t.y_up == pytest.approx(c.v_up, abs=1e-9 * scale)
    assert two_asset_price(t, c) == pytest.approx(a_x * t.x0 + a_y * t.y0, rel=1e-12, abs=1e-10 * scale)


@given(two_asset_markets(), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.floats(0.01, 100.0))
def test_numeraire_scale_invariance(t, f_up, f_dn, lam):
    c = BinaryClaim(f_up * t.y_up, f_dn * t.y_dn)
    scaled = TwoAssetOneStep(*(lam * v for v in (t.x0, t.y0, t.x_up, t.x_dn, t.y_up, t.y_dn)))
    base = two_asset_price(t, c)
    got = two_asset_price(scaled, BinaryClaim(lam * c.v_up, lam * c.v_dn))
    assert got == pytest.approx(lam * base, rel=1e-12, abs=1e-12 * lam * t.y0 * 3)
