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

# # Phase-averaged QFI for squeezing estimation
#
# The QFI for epsilon at fixed theta comes from the Bures distance between
# encodings at +/- delta/2. The phase is unknown, so average over theta.

import numpy as np

from gaussmet import (
    avg_qfi,
    bound_curve,
    coherent_from_photons,
    heisenberg_scaling_check,
    homodyne_classical_fi,
    qfi_at_theta,
    quantum_crb,
    squeezed_from_photons,
    thermal,
    tmsv_from_photons,
)
from gaussmet.qfi import BOUND_FAMILIES

n = 1.0
rows = {
    "thermal": avg_qfi(thermal(n)).avg_qfi,
    "coherent": avg_qfi(coherent_from_photons(n)).avg_qfi,
    "squeezed": avg_qfi(squeezed_from_photons(n)).avg_qfi,
    "tmsv": avg_qfi(tmsv_from_photons(n)).avg_qfi,
}
print(rows)
print({f: bound_curve(f, n) for f in BOUND_FAMILIES if f != "entangled-logneg"})

# Thermal states are isotropic, so theta does not matter. Squeezed states are
# not; the average hides a strong theta dependence.

thetas = np.linspace(0, np.pi, 7)
print(np.round([qfi_at_theta(squeezed_from_photons(n), th) for th in thetas], 4))
print(np.round([qfi_at_theta(thermal(n), th) for th in thetas], 4))

# Error bars for M repetitions.

h = rows["squeezed"]
print({m: quantum_crb(h, m) for m in (1, 100, 10_000)})

# Homodyne detection never beats the QFI.

s = squeezed_from_photons(n, 0.4)
print(max(homodyne_classical_fi(s, 0.3, phi) for phi in np.linspace(0, np.pi, 50)), qfi_at_theta(s, 0.3))

# Squeezed probes scale quadratically in the photon number, coherent ones linearly.

grid = np.geomspace(1, 32, 9)
for fam in ("squeezed", "coherent"):
    fit = heisenberg_scaling_check(fam, grid)
    print(fam, round(fit.exponent, 3), "(plain log n:", round(fit.naive_exponent, 3), ")")
