"""The two scaling limits: air-water and deep water.

Sending the upper layer to (vanishing density, growing height) collapses
the two-layer energy onto the single-layer water-wave functional; growing
the lower layer collapses it onto the local deep-water functional.  Both
sweeps converge monotonically on matched states.
"""
import numpy as np

from stratwave import Grid, PhysicalParams
from stratwave.verify import air_water_sweep, deep_water_sweep

grid = Grid(n=128, length=40.0)
params = PhysicalParams(rho1=1.0, rho2=2.0, h1=1.5, h2=1.0, g=1.0, L=10.0)
rng = np.random.default_rng(0)

air = air_water_sweep(params, grid, rng)
print("air-water limit (rho1 = 10^-k rho2, h1 = 10^(k/2) h2):")
for k, gap in air.series["air_water"]:
    print(f"  k = {k}: relative energy gap {gap:.3e}")

deep = deep_water_sweep(params, grid, np.random.default_rng(0))
print("deep-water limit (h2/h1 = 10^k):")
for k, gap in deep.series["deep_water"]:
    print(f"  k = {k}: relative energy gap {gap:.3e}")
