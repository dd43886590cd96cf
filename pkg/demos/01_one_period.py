"""One period, two states: replication and martingale probabilities."""
# %%
from numeraire import BinaryClaim, OneStepMarket, martingale_probs, price_one_step, replication_weights

# Forward 101, states 104 / 99, discount factor 100/101; claim pays 3 or 2.
market = OneStepMarket(x_fwd=101.0, x_up=104.0, x_dn=99.0, df=100 / 101)
claim = BinaryClaim(v_up=3.0, v_dn=2.0)

p_up, p_dn = martingale_probs(market)
a_x, a_rf = replication_weights(market, claim)
print(f"martingale probabilities: up {p_up:.4f}, down {p_dn:.4f}")
print(f"replicating portfolio: {a_x:.4f} units of X, {a_rf:.4f} cash at maturity")
print(f"price: {price_one_step(market, claim):.5f}")

# %% The weights price the asset itself correctly.
print("forward on X:", price_one_step(market, BinaryClaim(104.0, 99.0)))

# %% Moving the forward outside the state range is an arbitrage.
from numeraire import ArbitrageError

try:
    martingale_probs(OneStepMarket(105.0, 104.0, 99.0))
except ArbitrageError as exc:
    print("rejected:", exc)
