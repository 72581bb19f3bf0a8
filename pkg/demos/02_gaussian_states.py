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

# # Gaussian states, symplectic maps and fidelity
#
# A state is a covariance matrix plus a displacement, with the vacuum at the
# identity. A covariance matrix is physical when its symplectic eigenvalues
# are all at least 1.

import numpy as np

from gaussmet import (
    GaussianState,
    coherence,
    coherent_from_photons,
    gaussian_fidelity,
    log_negativity,
    mean_photon_numbers,
    purity,
    squeezed_from_photons,
    symplectic_eigenvalues,
    thermal,
    tmsv_from_photons,
    vacuum,
)
from gaussmet.symplectic import encode, partial_trace

for name, s in [("vacuum", vacuum()), ("thermal", thermal(1.0)), ("squeezed", squeezed_from_photons(1.0)), ("coherent", coherent_from_photons(1.0))]:
    print(f"{name:9s} n={mean_photon_numbers(s)[0]:.3f} purity={purity(s):.3f} nu={symplectic_eigenvalues(s.cm)} C={coherence(s):.3f}")

# Symplectic eigenvalues below one mean the matrix is not a state.

try:
    GaussianState(np.diag([0.5, 0.5]))
except ValueError as exc:
    print("rejected:", exc)

# The probe is squeezed by epsilon on mode A after a phase rotation theta.
# Fidelity between neighbouring encodings is what the QFI is built from.

s = coherent_from_photons(1.0)
for eps in (0.0, 0.01, 0.1):
    print(f"eps={eps}: F={gaussian_fidelity(s, encode(s, eps, 0.3)):.8f}")

# Two-mode squeezed vacuum: pure overall, each half is thermal.

t = tmsv_from_photons(1.0)
print("E_N =", log_negativity(t).log_negativity, " 2 asinh(1) =", 2 * np.arcsinh(1.0))
print("reduced A:", partial_trace(t, "A").cm)
