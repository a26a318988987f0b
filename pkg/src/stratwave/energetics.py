"""Hamiltonian functionals and their analytic variational derivatives.

One density family covers the reduced two-layer energy in both scalings and
the restricted four-field Hamiltonian; the single-layer (canonical and
classical water-wave), deep-water, and four-field energies are coded
directly from their displayed forms.  Dimensional prefactors (powers of h1,
h2) are kept exactly as the model formulas carry them; energies are
reported relative to the rest state (the hydrostatic additive constant is
dropped).

The finite-difference functional gradient :func:`fd_gradient` is the
independent oracle for every analytic gradient here: central nodal
differences with a relative step, divided by dx to represent the L2
variational derivative.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import VerticalScale, height_ratios, thicknesses
from .specops import diff, integrate


@dataclass(frozen=True)
class EnergyBreakdown:
    """Kinetic/potential split; pressure_work is nonzero only for the
    four-field system."""

    kinetic: float
    potential: float
    pressure_work: float = 0.0

    @property
    def total(self):
        return self.kinetic + self.potential + self.pressure_work


@dataclass(frozen=True)
class SGNParams:
    """Parameters of the single-layer canonical model: density, gravity,
    reference depth h (the level the free surface relaxes to), and the
    long-wave parameter.  g may be negative: the upper layer of the
    four-field system is this model with reversed gravity."""

    rho: float
    g: float
    depth: float
    epsilon: float

    def __post_init__(self):
        if self.rho <= 0 or self.depth <= 0:
            raise ValueError("rho and depth must be strictly positive")


# ------------------------------------------------------------------ two-layer density family
#
# f = kin * (eta1 eta2 / 2 psi) sigma^2
#     - disp * ( ca sigma_x^2 + cb zeta_x (sigma^2)_x + cc zeta_x^2 sigma^2 )
#     + (pot/2) g (rho2 - rho1) zeta^2
#
# with eta1 = H1 - zeta, eta2 = H2 + zeta, psi = rho1 eta2 + rho2 eta1,
# h = H1 + H2 and
#
#   ca = eta1^2 eta2^2 (rho1 eta1 + rho2 eta2) / (6 psi^2)
#   cb = rho1 rho2 h^2 eta1 eta2 (eta1 - eta2) / (6 psi^3)
#   cc = rho1 rho2 h^2 (rho2 eta1^3 + rho1 eta2^3) / (6 psi^4)
#
# Instances: lower-layer scaling (kin, disp, pot) = (h2, eps^2 h2, h2^2);
# upper-layer scaling (h1, delta h1^2/h2, h1^2); restricted four-field
# Hamiltonian (1, eps^2, 1).


def _family_coeffs(zeta, rho1, rho2, H1, H2):
    eta1 = H1 - zeta
    eta2 = H2 + zeta
    h = H1 + H2
    ps = rho1 * eta2 + rho2 * eta1
    psp = rho1 - rho2                       # d psi / d zeta

    q = eta1 * eta2 / ps
    qp = (rho2 * eta1**2 - rho1 * eta2**2) / ps**2

    Na = eta1**2 * eta2**2 * (rho1 * eta1 + rho2 * eta2)
    Nap = (2.0 * eta1 * eta2 * (eta1 - eta2) * (rho1 * eta1 + rho2 * eta2)
           + eta1**2 * eta2**2 * (rho2 - rho1))
    ca = Na / (6.0 * ps**2)
    cap = (Nap - 2.0 * Na * psp / ps) / (6.0 * ps**2)

    Mb = eta1 * eta2 * (eta1 - eta2)
    Mbp = (eta1 - eta2) ** 2 - 2.0 * eta1 * eta2
    cb = rho1 * rho2 * h**2 * Mb / (6.0 * ps**3)
    cbp = rho1 * rho2 * h**2 * (Mbp - 3.0 * Mb * psp / ps) / (6.0 * ps**3)

    K = rho2 * eta1**3 + rho1 * eta2**3
    Kp = 3.0 * (rho1 * eta2**2 - rho2 * eta1**2)
    cc = rho1 * rho2 * h**2 * K / (6.0 * ps**4)
    ccp = rho1 * rho2 * h**2 * (Kp - 4.0 * K * psp / ps) / (6.0 * ps**4)

    return q, qp, ca, cap, cb, cbp, cc, ccp


def _family_energy(zeta, sigma, rho1, rho2, H1, H2, g, kin, disp, pot, grid):
    q, _, ca, _, cb, _, cc, _ = _family_coeffs(zeta, rho1, rho2, H1, H2)
    zx = diff(zeta, grid, 1)
    sx = diff(sigma, grid, 1)
    kin_density = (kin * 0.5 * q * sigma**2
                   - disp * (ca * sx**2
                             + cb * zx * 2.0 * sigma * sx
                             + cc * zx**2 * sigma**2))
    pot_density = 0.5 * pot * g * (rho2 - rho1) * zeta**2
    return EnergyBreakdown(kinetic=integrate(kin_density, grid),
                           potential=integrate(pot_density, grid))


def _family_grad(zeta, sigma, rho1, rho2, H1, H2, g, kin, disp, pot, grid):
    q, qp, ca, cap, cb, cbp, cc, ccp = _family_coeffs(zeta, rho1, rho2, H1, H2)
    zx = diff(zeta, grid, 1)
    zxx = diff(zeta, grid, 2)
    sx = diff(sigma, grid, 1)
    sxx = diff(sigma, grid, 2)

    d_sigma = (kin * q * sigma
               + 2.0 * disp * (ca * sxx + cap * zx * sx
                               + (cbp * zx**2 + cb * zxx - cc * zx**2) * sigma))
    d_zeta = (0.5 * kin * qp * sigma**2
              + pot * g * (rho2 - rho1) * zeta
              + disp * (-cap * sx**2
                        + cb * (2.0 * sx**2 + 2.0 * sigma * sxx)
                        + (ccp * zx**2 + 2.0 * cc * zxx) * sigma**2
                        + 4.0 * cc * zx * sigma * sx))
    return d_zeta, d_sigma


def _two_layer_prefactors(params, regime):
    if regime.vertical_scale is VerticalScale.LOWER_LAYER:
        kin = params.h2
        disp = regime.epsilon**2 * params.h2
        pot = params.h2**2
    else:
        kin = params.h1
        disp = regime.delta * params.h1**2 / params.h2
        pot = params.h1**2
    return kin, disp, pot


def energy_two_layer(state, params, regime, grid):
    """Total O(eps^2) energy of the reduced two-layer system.

    Lower-layer scaling: leading term h2 eta1 eta2 sigma^2/(2 psi), three
    dispersive corrections at eps^2 h2, and potential h2^2 g (rho2-rho1)
    zeta^2 / 2.  Upper-layer scaling: same density with h1 prefactors and
    the delta h1^2/h2 dispersive weight of the deep-water rewrite.
    """
    thicknesses(state.zeta, params, regime)   # admissibility gate
    H1, H2, _ = height_ratios(params, regime)
    kin, disp, pot = _two_layer_prefactors(params, regime)
    return _family_energy(state.zeta, state.sigma, params.rho1, params.rho2,
                          H1, H2, params.g, kin, disp, pot, grid)


def grad_two_layer(state, params, regime, grid):
    """Analytic (dH/dzeta, dH/dsigma) of :func:`energy_two_layer`."""
    thicknesses(state.zeta, params, regime)
    H1, H2, _ = height_ratios(params, regime)
    kin, disp, pot = _two_layer_prefactors(params, regime)
    return _family_grad(state.zeta, state.sigma, params.rho1, params.rho2,
                        H1, H2, params.g, kin, disp, pot, grid)


# ------------------------------------------------------------------ single-layer canonical

def energy_sgn(state, params, grid):
    """(h^2/2) integral of (eta mu^2 - (eps^2/3) eta^3 mu_x^2)/rho
    + g rho (eta - h)^2."""
    h, rho, eps = params.depth, params.rho, params.epsilon
    mux = diff(state.mu, grid, 1)
    kin = 0.5 * h**2 / rho * (state.eta * state.mu**2
                              - eps**2 / 3.0 * state.eta**3 * mux**2)
    pot = 0.5 * h**2 * params.g * rho * (state.eta - h) ** 2
    return EnergyBreakdown(kinetic=integrate(kin, grid),
                           potential=integrate(pot, grid))


def grad_sgn(state, params, grid):
    """(dH/deta, dH/dmu) of :func:`energy_sgn`.

    Carries the h^2 prefactor of the functional; the evolution equations
    divide it out again (documented time rescaling), so that
    rhs = -(1/h^2) d/dx applied to these gradients.
    """
    h, rho, eps = params.depth, params.rho, params.epsilon
    eta, mu = state.eta, state.mu
    mux = diff(mu, grid, 1)
    d_eta = (0.5 * h**2 / rho * (mu**2 - eps**2 * eta**2 * mux**2)
             + h**2 * params.g * rho * (eta - h))
    d_mu = h**2 / rho * (eta * mu + eps**2 / 3.0 * diff(eta**3 * mux, grid, 1))
    return d_eta, d_mu


def energy_sgn_classic(eta, ubar, params, grid):
    """(1/2) integral of rho (eta ubar^2 + (eps^2/3) eta^3 ubar_x^2
    + g (eta - h)^2)."""
    h, rho, eps = params.depth, params.rho, params.epsilon
    ux = diff(ubar, grid, 1)
    kin = 0.5 * params.rho * (eta * ubar**2 + eps**2 / 3.0 * eta**3 * ux**2)
    pot = 0.5 * rho * params.g * (eta - h) ** 2
    return EnergyBreakdown(kinetic=integrate(kin, grid),
                           potential=integrate(pot, grid))


def grad_sgn_classic_m(eta, ubar, params, grid):
    """(dH/deta, dH/dm) of the classical energy in (eta, m) variables.

    dH/dm = ubar, and at fixed m,
    dH/deta = rho (g (eta-h) - ubar^2/2 - (eps^2/2) eta^2 ubar_x^2).
    The caller supplies ubar from the exact elliptic inversion of m.
    """
    rho, eps = params.rho, params.epsilon
    ux = diff(ubar, grid, 1)
    d_eta = rho * (params.g * (eta - params.depth)
                   - 0.5 * ubar**2 - 0.5 * eps**2 * eta**2 * ux**2)
    return d_eta, ubar


# ------------------------------------------------------------------ deep water

def energy_deepwater(state, params, regime, grid):
    """Effective deep-water energy.

    integral of h1 eta1 sigma^2/(2 rho1)
    - delta (h1^2 rho2 / (6 rho1^2)) ((eta1 sigma)_x)^2
    + h1^2 g (rho2 - rho1) (1 - eta1)^2 / 2.

    delta = 0 is the dispersionless limit.
    """
    if regime.vertical_scale is not VerticalScale.UPPER_LAYER:
        raise ValueError("deep-water energy requires the upper-layer scaling")
    rho1, rho2, h1 = params.rho1, params.rho2, params.h1
    delta = regime.delta
    eta1, sigma = state.eta1, state.sigma
    flux_x = diff(eta1 * sigma, grid, 1)
    kin = (0.5 * h1 * eta1 * sigma**2 / rho1
           - delta * h1**2 * rho2 / (6.0 * rho1**2) * flux_x**2)
    pot = 0.5 * h1**2 * params.g * (rho2 - rho1) * (1.0 - eta1) ** 2
    return EnergyBreakdown(kinetic=integrate(kin, grid),
                           potential=integrate(pot, grid))


def grad_deepwater(state, params, regime, grid):
    """(dH/deta1, dH/dsigma) of :func:`energy_deepwater`."""
    if regime.vertical_scale is not VerticalScale.UPPER_LAYER:
        raise ValueError("deep-water energy requires the upper-layer scaling")
    rho1, rho2, h1 = params.rho1, params.rho2, params.h1
    delta = regime.delta
    eta1, sigma = state.eta1, state.sigma
    c = delta * h1**2 * rho2 / (3.0 * rho1**2)
    flux_xx = diff(eta1 * sigma, grid, 2)
    d_eta1 = (0.5 * h1 * sigma**2 / rho1 + c * sigma * flux_xx
              - h1**2 * params.g * (rho2 - rho1) * (1.0 - eta1))
    d_sigma = h1 * eta1 * sigma / rho1 + c * eta1 * flux_xx
    return d_eta1, d_sigma


# ------------------------------------------------------------------ four-field system

def energy_cc_four(state, pressure, params, epsilon, grid):
    """Two coupled single-layer functionals plus interfacial pressure work.

    The upper layer enters with reversed gravity (-g rho1 (eta1-h1)^2);
    pressure work is integral of (eta1 + eta2) P.
    """
    kin = 0.0
    for eta, mu, rho in ((state.eta1, state.mu1, params.rho1),
                         (state.eta2, state.mu2, params.rho2)):
        if rho == 0.0:
            raise ValueError("four-field energy needs rho1 > 0")
        mux = diff(mu, grid, 1)
        kin += integrate(0.5 / rho * (eta * mu**2 - epsilon**2 / 3.0 * eta**3 * mux**2),
                         grid)
    pot = integrate(0.5 * params.g * (params.rho2 * (state.eta2 - params.h2) ** 2
                                      - params.rho1 * (state.eta1 - params.h1) ** 2),
                    grid)
    work = integrate((state.eta1 + state.eta2) * pressure, grid)
    return EnergyBreakdown(kinetic=kin, potential=pot, pressure_work=work)


def grad_cc_four(state, pressure, params, epsilon, grid):
    """(dH/deta1, dH/dmu1, dH/deta2, dH/dmu2) of :func:`energy_cc_four`."""
    out = []
    for eta, mu, rho, href, gsign in (
            (state.eta1, state.mu1, params.rho1, params.h1, -1.0),
            (state.eta2, state.mu2, params.rho2, params.h2, +1.0)):
        mux = diff(mu, grid, 1)
        d_eta = (0.5 / rho * (mu**2 - epsilon**2 * eta**2 * mux**2)
                 + gsign * params.g * rho * (eta - href) + pressure)
        d_mu = (eta * mu + epsilon**2 / 3.0 * diff(eta**3 * mux, grid, 1)) / rho
        out.extend([d_eta, d_mu])
    return tuple(out)


# ------------------------------------------------------------------ finite-difference oracle

def fd_gradient(functional, fields, component, grid, rel_step=1e-5):
    """Central-difference functional gradient with respect to one field.

    Perturbs each nodal value of fields[component] by +/- q with
    q = rel_step * (1 + max|field|) and returns (H+ - H-)/(2 q dx), the
    discrete representation of the L2 variational derivative.  One-sided
    differences are never used.

    Parameters
    ----------
    functional : callable
        Called as functional(*fields) -> float.
    fields : sequence of arrays
        The state components; only fields[component] is perturbed.
    component : int
    grid : Grid
    """
    work = [np.array(f, dtype=float) for f in fields]
    target = work[component]
    q = rel_step * (1.0 + float(np.max(np.abs(target))))
    grad = np.empty_like(target)
    for i in range(target.size):
        saved = target[i]
        target[i] = saved + q
        h_plus = functional(*work)
        target[i] = saved - q
        h_minus = functional(*work)
        target[i] = saved
        grad[i] = (h_plus - h_minus) / (2.0 * q * grid.dx)
    return grad
