"""Six-step geometric tree: forward and backward induction give the same price."""
# %%
import numpy as np

from numeraire import TreeSpec, backward_induction, build_lattice, forward_induction, parse, price_forward
from numeraire.cli import Report, render, tableau_tables

spec = TreeSpec(x0=100.0, u=1.02, d=0.98, steps=6, step_df=0.996)
payoff = parse("min(X, 101)")

# %% Probabilities propagate forwards...
dist = forward_induction(spec)
pay = np.minimum(build_lattice(spec).terminal, 101.0)
print("terminal probabilities:", np.round(dist.probabilities, 4))
print(f"expected payoff {dist.expectation(pay):.4f}, price {price_forward(spec, payoff):.4f}")

# %% ...expectations propagate backwards.
root, values = backward_induction(spec, pay)
print(f"backward root {root:.4f}")

# %% The tableaus as the CLI prints them.
fwd, bwd, _ = tableau_tables(spec, payoff)
print(render(Report([fwd, bwd]), "table"))

# %% A time-varying discount schedule still rolls back, one probability per level.
varying = TreeSpec(100.0, 1.02, 0.98, 6, [0.996, 0.996, 0.995, 0.995, 0.994, 0.994])
print("varying-rate price:", backward_induction(varying, pay)[0])
