"""Poisson structures, evolution right-hand sides, residual evaluators.

The canonical Darboux forms are the evolvers; the classical single-layer
system and both Boussinesq forms contain mixed space-time derivatives and
are therefore implemented as residual evaluators along canonical
trajectories, never stepped directly.  Time derivatives entering those
residuals are supplied analytically (chain rule through the transforms),
so residual magnitudes measure purely the asymptotic defect.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import VerticalScale
from .energetics import grad_sgn_classic_m, grad_two_layer
from .kinematics import u1_deepwater_from_sigma, ubar_from_m
from .specops import diff


class PoissonKind(enum.Enum):
    DARBOUX_PAIR = "darboux_pair"
    DARBOUX_QUAD = "darboux_quad"
    SGN_LIE = "sgn_lie"


@dataclass(frozen=True)
class PoissonStructure:
    """A Hamiltonian operator: cotangent fields -> tangent fields.

    apply(state, cov) takes stacked (k, n) arrays; constant structures
    ignore the state argument.  All structures are skew-adjoint under the
    discrete L2 pairing.
    """

    kind: PoissonKind
    apply: Callable[[np.ndarray, np.ndarray], np.ndarray]


def darboux_pair(grid):
    """Constant pair structure: (a, b) -> (-b_x, -a_x)."""

    def apply(state, cov):
        return np.stack([-diff(cov[1], grid, 1), -diff(cov[0], grid, 1)])

    return PoissonStructure(PoissonKind.DARBOUX_PAIR, apply)


def darboux_quad(grid):
    """Product of two Darboux pairs on (eta1, mu1, eta2, mu2)."""

    def apply(state, cov):
        return np.stack([-diff(cov[1], grid, 1), -diff(cov[0], grid, 1),
                         -diff(cov[3], grid, 1), -diff(cov[2], grid, 1)])

    return PoissonStructure(PoissonKind.DARBOUX_QUAD, apply)


def sgn_lie(grid):
    """Lie-theoretic linear structure on (eta, m):

    (a, b) -> ( -(eta b)_x , -(eta a_x + m b_x + (m b)_x) ).
    """

    def apply(state, cov):
        eta, m = state
        a, b = cov
        first = -diff(eta * b, grid, 1)
        second = -(eta * diff(a, grid, 1) + m * diff(b, grid, 1)
                   + diff(m * b, grid, 1))
        return np.stack([first, second])

    return PoissonStructure(PoissonKind.SGN_LIE, apply)


# ------------------------------------------------------------------ evolvers

def rhs_two_layer(state, params, regime, grid):
    """(zeta_t, sigma_t) = -(d/dx dH/dsigma, d/dx dH/dzeta)."""
    d_zeta, d_sigma = grad_two_layer(state, params, regime, grid)
    return -diff(d_sigma, grid, 1), -diff(d_zeta, grid, 1)


def rhs_sgn_canonical(state, params, grid):
    """Canonical single-layer evolution (time-rescaled form):

    eta_t = -[(eta mu)_x / rho + (eps^2/(3 rho)) (eta^3 mu_x)_xx]
    mu_t  = -[mu mu_x / rho + g rho eta_x - (eps^2/(2 rho)) (eta^2 mu_x^2)_x]

    Equals -(1/h^2) d/dx of the :func:`~stratwave.energetics.grad_sgn`
    components (the constant h^2 of the functional is absorbed into the
    documented time rescaling).
    """
    rho, eps = params.rho, params.epsilon
    eta, mu = state.eta, state.mu
    mux = diff(mu, grid, 1)
    eta_t = -(diff(eta * mu, grid, 1) / rho
              + eps**2 / (3.0 * rho) * diff(eta**3 * mux, grid, 2))
    mu_t = -(mu * mux / rho + params.g * rho * diff(eta, grid, 1)
             - eps**2 / (2.0 * rho) * diff(eta**2 * mux**2, grid, 1))
    return eta_t, mu_t


def rhs_sgn_classic_m(state, params, grid):
    """Evolution of (eta, m) under the Lie structure with the classical
    energy; uses the exact elliptic inversion m -> ubar."""
    ubar = ubar_from_m(state.m, state.eta, params.rho, params.epsilon, grid)
    d_eta, d_m = grad_sgn_classic_m(state.eta, ubar, params, grid)
    out = sgn_lie(grid).apply(np.stack([state.eta, state.m]),
                              np.stack([d_eta, d_m]))
    return out[0], out[1]


def rhs_deepwater(state, params, regime, grid):
    """Local deep-water evolution (signs exactly as displayed):

    eta1_t = (h1/rho1)(eta1 sigma)_x + (delta/3)(h1^2 rho2/rho1^2)(eta1 (eta1 sigma)_xx)_x
    sigma_t = (h1/rho1) sigma sigma_x + g h1^2 (rho2-rho1) eta1_x
              + (delta/3)(h1^2 rho2/rho1^2)(sigma (eta1 sigma)_xx)_x

    This is (ham_eq_mot) written in eta1 = 1 - zeta: the zeta -> eta1 flip
    reverses both signs relative to the (zeta, sigma) pair.
    """
    if regime.vertical_scale is not VerticalScale.UPPER_LAYER:
        raise ValueError("deep-water dynamics requires the upper-layer scaling")
    rho1, rho2, h1 = params.rho1, params.rho2, params.h1
    c = regime.delta / 3.0 * h1**2 * rho2 / rho1**2
    eta1, sigma = state.eta1, state.sigma
    flux_xx = diff(eta1 * sigma, grid, 2)
    eta1_t = (h1 / rho1 * diff(eta1 * sigma, grid, 1)
              + c * diff(eta1 * flux_xx, grid, 1))
    sigma_t = (h1 / rho1 * sigma * diff(sigma, grid, 1)
               + params.g * h1**2 * (rho2 - rho1) * diff(eta1, grid, 1)
               + c * diff(sigma * flux_xx, grid, 1))
    return eta1_t, sigma_t


def rhs_cc_four(state, pressure_x, params, epsilon, grid):
    """Four-field evolution; the upper layer carries reversed gravity.

    The caller supplies P_x (zero decouples the layers into two canonical
    single-layer systems with g -> -g and g -> +g).
    """
    out = []
    for eta, mu, rho, gsign in ((state.eta1, state.mu1, params.rho1, -1.0),
                                (state.eta2, state.mu2, params.rho2, +1.0)):
        mux = diff(mu, grid, 1)
        eta_t = -(diff(eta * mu, grid, 1) / rho
                  + epsilon**2 / (3.0 * rho) * diff(eta**3 * mux, grid, 2))
        mu_t = -(mu * mux / rho + gsign * params.g * rho * diff(eta, grid, 1)
                 - epsilon**2 / (2.0 * rho) * diff(eta**2 * mux**2, grid, 1)
                 + pressure_x)
        out.extend([eta_t, mu_t])
    return tuple(out)


# ------------------------------------------------------------------ canonical -> classical chain

def sgn_ubar_rate(eta, mu, eta_t, mu_t, params, grid):
    """(ubar, ubar_t) along a canonical trajectory via the truncated inverse
    momentum map ubar = mu/rho + (eps^2/(3 eta))(eta^3 (mu/rho)_x)_x."""
    rho, eps = params.rho, params.epsilon
    w = mu / rho
    w_t = mu_t / rho
    wx = diff(w, grid, 1)
    flux = eta**3 * wx
    ubar = w + eps**2 / (3.0 * eta) * diff(flux, grid, 1)
    flux_t = 3.0 * eta**2 * eta_t * wx + eta**3 * diff(w_t, grid, 1)
    ubar_t = (w_t
              - eps**2 / 3.0 * eta_t / eta**2 * diff(flux, grid, 1)
              + eps**2 / (3.0 * eta) * diff(flux_t, grid, 1))
    return ubar, ubar_t


def residual_sgn_classic(eta, ubar, eta_t, ubar_t, params, grid):
    """Residuals of the classical single-layer system:

    r1 = eta_t + (eta ubar)_x
    r2 = ubar_t + ubar ubar_x + g eta_x
         - (eps^2/(3 eta)) (eta^3 (ubar_tx + ubar ubar_xx - ubar_x^2))_x

    O(eps^4) along canonical trajectories mapped by :func:`sgn_ubar_rate`.
    """
    eps = params.epsilon
    ux = diff(ubar, grid, 1)
    uxx = diff(ubar, grid, 2)
    r1 = eta_t + diff(eta * ubar, grid, 1)
    inner = eta**3 * (diff(ubar_t, grid, 1) + ubar * uxx - ux**2)
    r2 = (ubar_t + ubar * ux + params.g * diff(eta, grid, 1)
          - eps**2 / (3.0 * eta) * diff(inner, grid, 1))
    return r1, r2


# ------------------------------------------------------------------ deep water -> Boussinesq chain

def deepwater_ubar_rate(eta1, sigma, eta1_t, sigma_t, params, regime, grid):
    """(ubar1, ubar1_t) from a deep-water trajectory at O(delta)."""
    rho1, rho2, h1 = params.rho1, params.rho2, params.h1
    c = regime.delta / 3.0 * h1 * rho2 / rho1**2
    ubar1 = u1_deepwater_from_sigma(sigma, eta1, rho1, rho2, h1, regime.delta, grid)
    ubar1_t = -sigma_t / rho1 - c * diff(eta1_t * sigma + eta1 * sigma_t, grid, 2)
    return ubar1, ubar1_t


def deepwater_eta1_tt(eta1, sigma, eta1_t, sigma_t, params, regime, grid):
    """Second time derivative of eta1 along the deep-water flow
    (directional derivative of the rhs)."""
    rho1, rho2, h1 = params.rho1, params.rho2, params.h1
    c = regime.delta / 3.0 * h1**2 * rho2 / rho1**2
    flux_t = eta1_t * sigma + eta1 * sigma_t
    flux_xx = diff(eta1 * sigma, grid, 2)
    return (h1 / rho1 * diff(flux_t, grid, 1)
            + c * diff(eta1_t * flux_xx + eta1 * diff(flux_t, grid, 2), grid, 1))


def residual_boussinesq(eta1, ubar1, eta1_t, ubar1_t, params, regime, grid,
                        eta1_tt=None):
    """Residuals of the two Boussinesq forms of the deep-water system.

    Returns (r1, r2_mixed, r2_favored):

    r1       = eta1_t + h1 (eta1 ubar1)_x
    r2_mixed = ubar1_t + h1 ubar1 ubar1_x + g h1^2 (rho2/rho1 - 1) eta1_x
               - (delta/3) h1 (rho2/rho1) (eta1 ubar1)_xxt
    r2_favored: same with the dispersive term traded for
               + (delta/3)(rho2/rho1) eta1_xtt  (needs eta1_tt; None otherwise).

    Both r2 residuals are O(delta^2) along deep-water trajectories.
    """
    rho1, rho2, h1 = params.rho1, params.rho2, params.h1
    delta = regime.delta
    common = (ubar1_t + h1 * ubar1 * diff(ubar1, grid, 1)
              + params.g * h1**2 * (rho2 / rho1 - 1.0) * diff(eta1, grid, 1))
    r1 = eta1_t + h1 * diff(eta1 * ubar1, grid, 1)
    mixed = diff(eta1_t * ubar1 + eta1 * ubar1_t, grid, 2)
    r2_mixed = common - delta / 3.0 * h1 * rho2 / rho1 * mixed
    r2_favored = None
    if eta1_tt is not None:
        r2_favored = common + delta / 3.0 * rho2 / rho1 * diff(eta1_tt, grid, 1)
    return r1, r2_mixed, r2_favored
