"""Two risky assets: pricing in units of Y."""
# %%
from numeraire import BinaryClaim, TwoAssetOneStep, two_asset_price, two_asset_probs, two_asset_replication

t = TwoAssetOneStep(x0=100.0, y0=100.0, x_up=120.0, x_dn=90.0, y_up=100.0, y_dn=100.0)
claim = BinaryClaim(20.0, 0.0)  # max(X - Y, 0) in each state
print("Y-measure up probability:", two_asset_probs(t))
a_x, a_y = two_asset_replication(t, claim)
print(f"replication: {a_x:.4f} X + {a_y:.4f} Y -> {a_x * t.x0 + a_y * t.y0:.4f}")
print("numeraire price:", two_asset_price(t, claim))

# %% Many steps: a tree for X/Y with Y as numeraire.
from numeraire import check_homothetic, numeraire_tree_price, parse

for text in ("max(X - Y, 0)", "X*X"):
    print(text, "->", check_homothetic(parse(text)).verdict.value)
print("4-step exchange option:", numeraire_tree_price(100.0, 100.0, 1.1, 0.9, 4, "max(X - Y, 0)"))
