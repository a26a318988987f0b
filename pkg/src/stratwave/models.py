"""Model descriptors bundling energy, gradient, Poisson structure, and
admissibility for the time loop and the command-line driver."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import dirac, dynamics, energetics
from .core import (CCFourState, DeepWaterState, Grid, SGNCanonicalState,
                   TwoLayerState, thicknesses)
from .energetics import SGNParams
from .specops import diff, integrate


@dataclass(frozen=True)
class HamiltonianModel:
    """Everything the integrator and diagnostics need, on stacked arrays."""

    name: str
    grid: Grid
    field_names: Sequence[str]
    rhs: Callable[[np.ndarray], np.ndarray]
    energy: Callable[[np.ndarray], energetics.EnergyBreakdown]
    gradient: Callable[[np.ndarray], np.ndarray]
    poisson: dynamics.PoissonStructure
    check_admissible: Callable[[np.ndarray], None]
    mass: Optional[Callable[[np.ndarray], float]] = None
    momentum: Optional[Callable[[np.ndarray], float]] = None
    constraint_residual: Optional[Callable[[np.ndarray], float]] = None


def two_layer_model(params, regime, grid):
    """Reduced two-layer system in (zeta, sigma)."""

    def state_of(y):
        return TwoLayerState(zeta=y[0], sigma=y[1])

    def rhs(y):
        zt, st = dynamics.rhs_two_layer(state_of(y), params, regime, grid)
        return np.stack([zt, st])

    def energy(y):
        return energetics.energy_two_layer(state_of(y), params, regime, grid)

    def gradient(y):
        dz, ds = energetics.grad_two_layer(state_of(y), params, regime, grid)
        return np.stack([dz, ds])

    def check(y):
        thicknesses(y[0], params, regime)

    def phi2_max(y):
        cc = dirac.reconstruct_constrained(y[0], y[1], params,
                                           regime.epsilon, grid)
        return dirac.constraints(cc, params, regime.epsilon, grid).max_abs()[1]

    return HamiltonianModel(
        name="two_layer", grid=grid, field_names=("zeta", "sigma"),
        rhs=rhs, energy=energy, gradient=gradient,
        poisson=dynamics.darboux_pair(grid), check_admissible=check,
        mass=lambda y: integrate(y[0], grid),
        momentum=lambda y: integrate(y[1], grid),
        constraint_residual=phi2_max,
    )


def sgn_canonical_model(params, grid):
    """Canonical single-layer system in (eta, mu); params is SGNParams."""

    def state_of(y):
        return SGNCanonicalState(eta=y[0], mu=y[1])

    def rhs(y):
        et, mt = dynamics.rhs_sgn_canonical(state_of(y), params, grid)
        return np.stack([et, mt])

    def energy(y):
        return energetics.energy_sgn(state_of(y), params, grid)

    def gradient(y):
        de, dm = energetics.grad_sgn(state_of(y), params, grid)
        return np.stack([de, dm])

    def check(y):
        state_of(y)      # constructor enforces eta > floor

    return HamiltonianModel(
        name="sgn_canonical", grid=grid, field_names=("eta", "mu"),
        rhs=rhs, energy=energy, gradient=gradient,
        poisson=dynamics.darboux_pair(grid), check_admissible=check,
        mass=lambda y: integrate(y[0], grid),
        momentum=lambda y: integrate(y[1], grid),
    )


def deepwater_model(params, regime, grid):
    """Local deep-water system in (eta1, sigma)."""

    def state_of(y):
        return DeepWaterState(eta1=y[0], sigma=y[1])

    def rhs(y):
        et, st = dynamics.rhs_deepwater(state_of(y), params, regime, grid)
        return np.stack([et, st])

    def energy(y):
        return energetics.energy_deepwater(state_of(y), params, regime, grid)

    def gradient(y):
        de, ds = energetics.grad_deepwater(state_of(y), params, regime, grid)
        return np.stack([de, ds])

    def check(y):
        state_of(y)

    return HamiltonianModel(
        name="deepwater", grid=grid, field_names=("eta1", "sigma"),
        rhs=rhs, energy=energy, gradient=gradient,
        poisson=dynamics.darboux_pair(grid), check_admissible=check,
        mass=lambda y: integrate(y[0], grid),
        momentum=lambda y: integrate(y[1], grid),
    )


def cc_four_model(params, epsilon, grid, pressure=None):
    """Four-field system; the interfacial pressure field is a fixed input
    (zero by default, which block-decouples the layers)."""
    if pressure is None:
        pressure = np.zeros(grid.n)
    pressure = np.asarray(pressure, dtype=float)
    pressure_x = diff(pressure, grid, 1)

    def state_of(y):
        return CCFourState(eta1=y[0], mu1=y[1], eta2=y[2], mu2=y[3])

    def rhs(y):
        return np.stack(dynamics.rhs_cc_four(state_of(y), pressure_x,
                                             params, epsilon, grid))

    def energy(y):
        return energetics.energy_cc_four(state_of(y), pressure, params,
                                         epsilon, grid)

    def gradient(y):
        return np.stack(energetics.grad_cc_four(state_of(y), pressure,
                                                params, epsilon, grid))

    def check(y):
        state_of(y)

    def phi2_max(y):
        return dirac.constraints(state_of(y), params, epsilon,
                                 grid).max_abs()[1]

    return HamiltonianModel(
        name="cc_four", grid=grid,
        field_names=("eta1", "mu1", "eta2", "mu2"),
        rhs=rhs, energy=energy, gradient=gradient,
        poisson=dynamics.darboux_quad(grid), check_admissible=check,
        mass=lambda y: integrate(y[0], grid) + integrate(y[2], grid),
        momentum=lambda y: integrate(y[1], grid) + integrate(y[3], grid),
        constraint_residual=phi2_max,
    )
