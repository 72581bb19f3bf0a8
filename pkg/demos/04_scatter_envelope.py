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

# # Random states between the bounds
#
# Sample each family, compute the average QFI, and compare the upper
# envelope with the closed-form caps.

import numpy as np

from gaussmet import bound_curve
from gaussmet.sampler import StateClassSpec, envelope, scatter_experiment

COUNT = 400

checks = {
    "general-1mode": ("pure-squeezed-upper", "thermal-lower"),
    "general-2mode": ("pure-squeezed-upper", "thermal-lower"),
    "separable-standard": ("separable-upper", None),
    "discordant": ("discord-upper", None),
}
for family, (upper, lower) in checks.items():
    ds = scatter_experiment(StateClassSpec(family, seed=5), COUNT, nodes=64)
    n, h = ds.column("n_A"), ds.column("avg_qfi")
    above = np.max(h - bound_curve(upper, n))
    below = np.min(h - bound_curve(lower, n)) if lower else np.nan
    env = envelope(ds, bins=20, reference=lambda x, u=upper: bound_curve(u, x))
    print(f"{family:19s} max(h - upper)={above:+.3f}  min(h - lower)={below:+.3f}  best bin={max(b['max_ratio'] for b in env):.3f}")

# Entangled two-mode states: the average QFI against the log-negativity.

ds = scatter_experiment(StateClassSpec("general-2mode", seed=6), COUNT, nodes=64)
e_n = ds.column("E_N")
ent = e_n > 0
print(f"{ent.sum()} of {len(ds)} general two-mode states are entangled")
print(np.round(np.c_[e_n[ent], ds.column("avg_qfi")[ent]][:5], 3))
