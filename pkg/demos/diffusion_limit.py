"""The OU diffusion on the spider as the limit of the chain."""
# %%
import numpy as np

from espider import (DiffusionParams, example_switch_matrix, fokker_planck_evolve, moments_X,
                     simulate_spider_ou, stationary_density_w, switch_stationary)
from espider.diffusion import empirical_density_l1, ray_occupancy
from espider import compare

# %% discrete law against the diffusion density
for row in compare.table3([5000, 15000], 0.1, 1.0, [0, 20, 50]):
    print(row.N, row.k, f"{float(row.approx):.6g} {float(row.exact):.6g} delta={row.delta:.3e}")

# %% relaxation under the Fokker-Planck equation
p = DiffusionParams.from_limit(1.0, 1.0, 0.5)
bump = lambda x: np.exp(-(x - 3.0) ** 2 / 0.02) / np.sqrt(0.02 * np.pi)
res = fokker_planck_evolve(bump, p, 10.0, n_cells=1000, snapshot_times=[0.5, 2, 10])
w = stationary_density_w(res.x, p)
for t, h in res.snapshots:
    print(f"t={t}: L1 to w = {np.sum(np.abs(h - w)) * res.dx:.2e}")
print("mean, var:", moments_X(p))

# %% Euler-Maruyama paths with ray switching at the vertex
C = example_switch_matrix("random-walk", 4, 0.3)
path = simulate_spider_ou(DiffusionParams.from_limit(4.0, 4.0, 0.5), C, 10.0, 1e-3, seed=3,
                          n_paths=1000, record_every=10)
mean, se = ray_occupancy(path, burn_in=3.0)
print("occupancy", np.round(mean, 4), "target", np.round(switch_stationary(C), 4))
print("histogram L1", empirical_density_l1(path, DiffusionParams.from_limit(4.0, 4.0, 0.5), 3.0))
