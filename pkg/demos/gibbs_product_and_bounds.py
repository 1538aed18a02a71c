"""Surface perturbation of a Gibbs state and the Peierls-Bogoliubov / Golden-Thompson slacks.

Run: python demos/gibbs_product_and_bounds.py
"""

import numpy as np

from qgibbs import LocalOperator, Region, gibbs_product_check, pb_gt_check, preset_potential
from qgibbs.harness import random_pair

beta = 0.7
ambient = Region.interval(0, 6)
inner = Region.interval(2, 4)
for name in ("classical_ising", "tfi", "xy", "heisenberg"):
    chk = gibbs_product_check(preset_potential(name), beta, inner, ambient)
    print(f"{name:16s} marginal gap {chk.marginal_gap:.1e}   factorization gap {chk.factorization_gap:.1e}")

rng = np.random.default_rng(7)
worst = np.inf
for dim in (4, 8, 16):
    for _ in range(20):
        rho, h = random_pair(rng, dim)
        s = pb_gt_check(rho, h)
        worst = min(worst, s.pb_slack, s.gt_slack, s.norm_lower_slack, s.norm_upper_slack)
print(f"smallest slack over 60 random pairs: {worst:.3e}  (all slacks must be >= 0)")

# commuting, diagonal case: Golden-Thompson is tight
rho = LocalOperator((0,), 4, np.diag([0.1, 0.2, 0.3, 0.4]), True)
h = LocalOperator((0,), 4, np.diag([0.5, -1.0, 0.2, 0.0]), True)
print(f"commuting pair: GT slack {pb_gt_check(rho, h).gt_slack:.1e}")
