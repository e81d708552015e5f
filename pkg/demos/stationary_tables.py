"""Stationary law far outside double range, its large-N approximation and entropy."""
# %%
from espider import compare
from espider.stationary import entropy_argmax, moments, rho_k

# %% extreme probabilities stay exact in log space
v = rho_k(1000, 0.25, 1000)
print("rho_1000 at N=1000, rho=0.25:", v.format(), "log10 =", v.log10())

# %% exact versus large-N approximation
for row in compare.table1([100, 1000], [0.25, 0.5], [0, 20]):
    print(row.N, row.param, row.k, row.exact.format(8), row.approx.format(8), f"{row.delta:+.2e}")

# %% reproduction report against the stored reference cells
for name, cells in (("table1", compare.check_table1()), ("table3", compare.check_table3())):
    bad = [c for c in cells if not c.ok]
    print(f"{name}: {len(cells) - len(bad)}/{len(cells)} cells reproduce")
    for c in bad[:3]:
        print("   ", c.label, c.computed, "vs", c.printed)

# %% entropy maximizers and moments
for N in (2, 10, 30):
    print(N, round(entropy_argmax(N).argmax, 4), moments(1.0, N))
