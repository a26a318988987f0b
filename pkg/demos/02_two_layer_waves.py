"""Evolve the reduced two-layer system and watch its invariants.

A small interface bump splits into left- and right-going internal waves.
The implicit midpoint integrator keeps the Hamiltonian to ~1e-11 relative
and the Casimirs (integral of zeta, integral of sigma) to machine
precision over ten thousand steps.
"""
import numpy as np

from stratwave import (Grid, IntegratorConfig, PhysicalParams, ScalingRegime,
                       run, two_layer_model)

params = PhysicalParams(rho1=1.0, rho2=2.0, h1=1.5, h2=1.0, g=1.0, L=10.0)
regime = ScalingRegime.lower_layer(params)
grid = Grid(n=128, length=40.0)
model = two_layer_model(params, regime, grid)

x = grid.nodes
zeta0 = 0.01 * np.exp(-((x - 20.0) / 1.5) ** 2)
zeta0 -= zeta0.mean()
state0 = np.stack([zeta0, np.zeros(grid.n)])

config = IntegratorConfig(dt=1e-3, t_end=10.0, fp_tol=1e-13, diag_every=1000)
result = run(model, state0, config)

print(f"{'t':>6} {'energy':>14} {'mass':>12} {'momentum':>12} {'|phi2|':>10}")
for rec in result.diagnostics:
    print(f"{rec.time:6.1f} {rec.energy:14.10f} {rec.mass:12.2e} "
          f"{rec.momentum:12.2e} {rec.constraint_residual:10.2e}")

e0 = result.diagnostics[0].energy
drift = max(abs(r.energy - e0) for r in result.diagnostics) / abs(e0)
print(f"\nrelative energy drift over T=10: {drift:.2e}")
peak = np.max(np.abs(result.final_state[0]))
print(f"final interface peak (initial 0.01): {peak:.4f}")
