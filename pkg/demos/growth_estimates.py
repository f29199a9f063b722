# %% [markdown]
# # Empirical growth estimates
#
# Word-length inequalities over a box of group elements and the fitted
# constants behind convergence.  The last cell fits Fourier-coefficient growth.

# %%
from logvvmf.estimates import fit_fourier_growth, fit_K6, fit_lame_constant, fit_norm_growth, sweep_group
from logvvmf.logq import eisenstein
from logvvmf.rep import standard_rep, trivial_rep, unipotent_rep

print(sweep_group(30).as_dict()["cases"])
print("K6 ~", fit_K6())
print("Lame constant ~", fit_lame_constant(60))
for name, rho in [("trivial", trivial_rep()), ("standard", standard_rep()), ("Sym^2", unipotent_rep(3))]:
    fit = fit_norm_growth(rho)
    print(f"{name:9s} K3={fit.K3:.3f} K4={fit.K4:.3f} inverse ratio {fit.inverse_ratio:.2f}")

# %%
print("Delta:", fit_fourier_growth(eisenstein("Delta", 2001), 12, cuspidal=True).as_dict())
print("E4:   ", fit_fourier_growth(eisenstein("E4", 2001), 4).as_dict())
