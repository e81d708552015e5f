"""Transient level law: closed form, exact oracle and Monte Carlo side by side."""
# %%
import numpy as np

from espider import ModelParams, estimate_pk, level_probs_closed, roots_of_P, transient_oracle

# %% spectral data for lambda = mu: roots of P and the weights of p(0, t)
sd = roots_of_P(4, 1.0)
print("roots  ", np.round(sd.roots, 6))
print("weights", np.round(2 * sd.weights, 6))

# %% closed form against the uniformization oracle
params = ModelParams(1.0, 1.0, 4, d=3)
for t in (0.1, 0.5, 2.0):
    closed = level_probs_closed(t, 4, 1.0)
    oracle = transient_oracle(params, t).level_probs
    print(f"t={t}: max diff {np.max(np.abs(closed - oracle)):.1e}")

# %% unequal rates: only the oracle and simulation are available
params = ModelParams(2.0, 1.0, 3, d=2)
times = [0.5, 1.0, 3.0]
tabs = estimate_pk(params, times, 20_000, seed=1)
for t, tab, sol in zip(times, tabs, transient_oracle(params, times)):
    inside = np.abs(tab.point - sol.level_probs) <= tab.half_width_95
    print(f"t={t}: MC {np.round(tab.point, 4)} exact {np.round(sol.level_probs, 4)} covered {inside}")
