"""stratwave: Hamiltonian long-wave models for sharply stratified fluids.

A simulation and verification toolkit for the family of one-dimensional
Hamiltonian models of two-layer stratified flow: the reduced two-layer
system in Darboux coordinates, the canonical and classical single-layer
water-wave systems, the local deep-water/Boussinesq family, and the
constrained four-field system with its Dirac reduction.
"""
from .core import (AdmissibilityError, CCFourState, DeepWaterState, Grid,
                   PhysicalParams, ScalingRegime, SGNCanonicalState,
                   SGNClassicState, THICKNESS_FLOOR, TwoLayerState,
                   VerticalScale, height_ratios, psi, state_from_dict,
                   thicknesses)
from .energetics import (EnergyBreakdown, SGNParams, energy_cc_four,
                         energy_deepwater, energy_sgn, energy_sgn_classic,
                         energy_two_layer, fd_gradient, grad_cc_four,
                         grad_deepwater, grad_sgn, grad_two_layer)
from .specops import (EllipticSolveError, LinearOperator, diff, diff_matrix,
                      integrate, near_identity_inverse, solve_elliptic)
from .timeloop import (DiagnosticsRecord, FixedPointError, IntegratorConfig,
                       RunResult, TimeLoopError, run, step_implicit_midpoint,
                       step_rk4)
from .models import (HamiltonianModel, cc_four_model, deepwater_model,
                     sgn_canonical_model, two_layer_model)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
