"""Moments of X/Y on the symmetric tree converge to a lognormal law."""
# %%
from numeraire import MomentSpec, finite_n_moment, limit_moment, lognormal_law, moment_relation_residual

for lam in (-1.0, 0.5, 2.0, 3.0):
    row = []
    for n in (10, 100, 1000, 10_000, 100_000):
        ms = MomentSpec(lam, sigma=0.2, maturity=1.0, steps=n)
        row.append(abs(finite_n_moment(ms) / limit_moment(ms) - 1))
    print(f"lambda={lam:5.1f}  rel. error by n:", "  ".join(f"{e:.1e}" for e in row))

# %% Matching the moment function with a normal MGF identifies the law of ln(X_T/Y_T).
for measure in ("Y", "X"):
    law = lognormal_law(measure, 100.0, 100.0, 0.2, 1.0)
    print(f"under {measure}: mean {law.mean_log:+.3f}, variance {law.var_log:.3f}")

# %% The two measures are one exponent apart.
print("max residual:", max(moment_relation_residual(l / 4, 0.3, 2.0) for l in range(-12, 13)))
