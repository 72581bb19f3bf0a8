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

# # Cross-check in a truncated Fock space
#
# The same states as density matrices. Fidelity comes from the nuclear norm
# and the QFI from the symmetric logarithmic derivative. Neither touches a
# covariance matrix formula.

from gaussmet import TruncationError, gaussian_fidelity, qfi_at_theta
from gaussmet.fock import build_state, fidelity_fock, fixture_states, qfi_sld_at_theta

fx = fixture_states(60)
for name, (rho, g) in fx.items():
    print(f"{name:16s} trace={rho.trace:.10f}  QFI fock={qfi_sld_at_theta(rho, 0.5):.6f}  gaussian={qfi_at_theta(g, 0.5):.6f}")

(a, ga), (b, gb) = fx["coherent(n=1)"], fx["squeezed(r=0.5)"]
print("fidelity:", fidelity_fock(a, b), gaussian_fidelity(ga, gb))

# A cutoff too small for the state is refused, with a suggested dimension.

try:
    build_state("thermal", 12, nbar=3.0)
except TruncationError as exc:
    print(exc)
