# %% [markdown]
# # Scalar Poincare series against classical forms
#
# For the trivial representation the Poincare series with shift 0 is the
# Eisenstein series of its weight, and with shift 1 it is a cusp form.  We sum
# the series numerically, fit q-expansions from samples and compare.

# %%
import numpy as np

from logvvmf import PoincareParams, eisenstein, extract_coefficients, poincare_eval, trivial_rep

rho = trivial_rep()

# %% Weight 8 equals E4^2
params = PoincareParams(nu=(0,), k=(8,), N=200)
tau = 0.1 + 1.05j
s = poincare_eval(rho, params, tau)
print("P(tau)       ", s.value[0, 0], " tail bound", s.tail_bound)
print("E4(tau)^2    ", (eisenstein("E4", 20) ** 2)(tau))

ex = extract_coefficients(rho, params, Nq=5)
print("fitted q-expansion:", np.round(ex[0, 0].to_float().qseries(0).real, 6))
print("E4^2:              ", (eisenstein("E4", 5) ** 2).to_float().qseries(0).real)

# %% Weight 12 with shift 1 is proportional to Delta
ex = extract_coefficients(rho, PoincareParams((1,), (12,), N=200), Nq=6)
c = ex[0, 0].to_float().qseries(0).real
print("ratios a(n)/a(1):", np.round(c[1:] / c[1], 6))
print("Ramanujan tau:    ", eisenstein("Delta", 6).to_float().qseries(0).real[1:])
