"""Entropy-fluctuation concentration and the product-state lower bound on the pressure.

Run: python demos/mcmillan_and_mean_field.py
"""

from qgibbs import Region, mean_field_scan, pressure, preset_potential
from qgibbs.harness import load_config, mcmillan_check

res = mcmillan_check(load_config(overrides={"boxes": [2, 4, 6, 8], "output.write": False}))
print(f"mcmillan: {res.status}")
for row in res.results["rows"]:
    print(f"  |L| = {row['volume']:2d}  mean {row['mean']:.5f}  variance {row['variance']:.5f}")

pot = preset_potential("heisenberg")
boxes = [Region.centered_box(n) for n in (4, 6, 8, 10)]
for beta in (0.5, 1.0):
    mf = mean_field_scan(pot, beta, boxes=boxes)
    p = pressure(pot, beta, boxes).limit_estimate
    print(f"beta {beta}: mean-field {mf.value:.6f} <= pressure {p:.6f}   Bloch vector {mf.params.round(4)}")
