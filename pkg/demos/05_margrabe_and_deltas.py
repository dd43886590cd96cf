"""Exchange option: closed form, tree convergence, parity and deltas."""
# %%
from numeraire import (
    ExchangeOptionInputs,
    black_scholes_call,
    exchange_delta,
    exchange_put,
    exchange_tree_price,
    margrabe_price,
)

inp = ExchangeOptionInputs(x0=100.0, y0=100.0, sigma=0.2, maturity=1.0)
call, d_plus, d_minus = margrabe_price(inp)
print(f"call {call:.6f}  d+ {d_plus:.4f}  d- {d_minus:.4f}")

# %% Tree prices approach the closed form roughly like 1/n.
for n in (16, 64, 256, 1024, 4096):
    tree = exchange_tree_price(inp, n)
    print(f"n={n:5d}  tree {tree:.6f}  error {tree - call:+.2e}")

# %% Parity and Black-Scholes as the cash-numeraire special case.
print("C - P =", call - exchange_put(inp), " X0 - Y0 =", inp.x0 - inp.y0)
print("Black-Scholes, K=100, r=0:", black_scholes_call(100.0, 100.0, 0.0, 0.2, 1.0))

# %% The coefficient of X0 is the delta; a bump confirms it.
dx, dy = exchange_delta(inp)
h = 1e-3
bumped = (margrabe_price(ExchangeOptionInputs(100 + h, 100, 0.2, 1))[0]
          - margrabe_price(ExchangeOptionInputs(100 - h, 100, 0.2, 1))[0]) / (2 * h)
print(f"delta_x {dx:.8f}  finite difference {bumped:.8f}")
print(f"x0*dx + y0*dy = {inp.x0 * dx + inp.y0 * dy:.10f}  (= call)")
