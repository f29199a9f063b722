# %% [markdown]
# # Modular linear differential equations
#
# Exact searches over the graded ring C[E4, E6] in rational arithmetic.

# %%
from logvvmf.logq import LogQSeries, eisenstein
from logvvmf.mlde import find_mlde, hilbert_series_check, minimal_mlde

N = 40
E4, Delta = eisenstein("E4", N), eisenstein("Delta", N)
one, tau = LogQSeries.constant(1, N), LogQSeries.tau(N)

print("Delta:     ", minimal_mlde([Delta], 12))
print("(1, tau):  ", minimal_mlde([one, tau], -1))
print("E4:        ", find_mlde([E4], 4, order=1, max_lead=4))

# %% Free-module dimension count for the trivial representation
report = hilbert_series_check([0], range(0, 25), generators=[[one]])
print({k: v for k, v in report.observed.items() if k % 2 == 0})
