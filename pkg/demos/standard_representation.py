# %% [markdown]
# # Logarithmic forms for the defining representation
#
# In the basis where rho(T) is a single 2x2 modified Jordan block, the vector
# (1, tau) transforms like a weight -1 form.  The Poincare series of weight 7
# produces logarithmic q-expansions whose tau-degree follows the block
# structure, and even weights vanish because rho(S^2) = -I.

# %%
import numpy as np

from logvvmf import PoincareParams, extract_coefficients, standard_rep
from logvvmf.poincare import build_holomorphic_form, modularity_residual, poincare_eval
from logvvmf.sl2z import S, T

rho = standard_rep()
params = PoincareParams(nu=(0,), k=(7, 7), N=100)

# %% Transformation law
for name, g in [("S", S), ("TS", T @ S)]:
    print(name, [f"{modularity_residual(rho, params.with_N(n), g, 1j):.1e}" for n in (25, 50, 100)])

# %% Even weight: the whole series vanishes
odd = PoincareParams((0,), (8, 8), N=100, folded=False)
print("max |P| at weight 8:", np.abs(poincare_eval(rho, odd, 0.2 + 1.1j).value).max())

# %% Logarithmic q-expansions
ex = extract_coefficients(rho, params, Nq=4)
for m in range(2):
    for n in range(2):
        print(f"P[{m},{n}] =", ex[m, n].to_float())

# %% A holomorphic vector-valued form from a negative shift
hf = build_holomorphic_form(rho, PoincareParams((-1,), (13, 13), N=60), v=1, Nq=6)
print("rank", hf.rank, hf.classifications)
