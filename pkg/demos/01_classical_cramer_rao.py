# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# # Classical Fisher information and the Cramer-Rao bound
#
# Start with a biased coin. The outcome probabilities are (1 - t, t), so the
# Fisher information is 1 / (t (1 - t)), which equals 4 at t = 1/2.

import numpy as np

from gaussmet.classical import (
    GaussianLocationModel,
    bernoulli_family,
    binned_gaussian_family,
    fisher_gaussian_location,
    fisher_scalar_discrete,
    hellinger_expansion_check,
    mle_location_experiment,
)

coin = bernoulli_family()
for t in (0.1, 0.5, 0.9):
    print(f"t={t}: I={fisher_scalar_discrete(coin, t):.6f}  exact={1 / (t * (1 - t)):.6f}")

# A position measured with Gaussian noise of width sigma carries 1/sigma^2 per
# sample. Binning the line finely enough recovers almost all of it.

fine = binned_gaussian_family(sigma=1.0)
print("closed form:", fisher_gaussian_location(GaussianLocationModel(0.0, 1.0)))
print("binned     :", fisher_scalar_discrete(fine, 0.0))

# Close to theta, the squared Hellinger distance between neighbouring
# distributions grows like I delta^2 / 4.

rep = hellinger_expansion_check(coin, 0.5, [1e-1, 3e-2, 1e-2, 3e-3, 1e-3])
for d, r in zip(rep.deltas, rep.ratios):
    print(f"delta={d:.0e}  d_H^2/delta^2={r:.6f}")
print("extrapolated:", rep.limit, " I/4 =", fisher_scalar_discrete(coin, 0.5) / 4)

# The sample mean is the maximum-likelihood estimate here. Its spread over many
# repetitions sits on the bound sigma/sqrt(N).

mle = mle_location_experiment(GaussianLocationModel(0.0, 1.0), n_samples=1000, n_trials=2000, seed=1)
print(f"std={mle.empirical_std:.5f}  crb={mle.crb:.5f}  ratio={mle.ratio:.4f}")
print(np.round([row[-1] for row in mle.rows()], 3))
