"""O(eps^2) transforms between velocity representations and momenta.

Three representations of each layer's horizontal velocity appear in the
long-wave expansion: the rigid-boundary value u0, the interface trace
u~ (tilde), and the layer mean u- (bar).  This module implements the
truncated transforms between them, the constraint-driven eliminations that
express layer velocities and momenta through the shear sigma, and the
momentum maps of the single-layer models.

All inverse transforms are the O(eps^2) truncations of the expansion, not
exact operator inverses; forward/inverse pairs compose to identity + O(eps^4).
The single exception is :func:`ubar_from_m`, which inverts the exact
definition of the conjugate momentum m with an elliptic solve.
"""
from __future__ import annotations

import enum

import numpy as np

from .specops import diff, solve_elliptic


class Layer(enum.Enum):
    UPPER = 1
    LOWER = 2


def layer_sign(layer):
    """The (-1)^(j+1) factor attached to layer j's vertical velocity."""
    return 1.0 if layer is Layer.UPPER else -1.0


# ----------------------------------------------------------------- boundary / interface / mean

def interface_from_boundary(u0, eta, eps, grid):
    """u~ = u0 - (eps^2/2) eta^2 u0_xx."""
    return u0 - 0.5 * eps**2 * eta**2 * diff(u0, grid, 2)


def boundary_from_interface(ut, eta, eps, grid):
    """u0 = u~ + (eps^2/2) eta^2 u~_xx (truncated inverse)."""
    return ut + 0.5 * eps**2 * eta**2 * diff(ut, grid, 2)


def w_from_interface(ut, eta, eps, grid, layer):
    """Vertical interface velocity w~ = (-1)^(j+1) eps (eta u~_x + (eps^2/3)(eta^3 u~_xx)_x).

    The O(eps) leading term makes w~/u~ = O(eps).
    """
    inner = eta * diff(ut, grid, 1) + eps**2 / 3.0 * diff(eta**3 * diff(ut, grid, 2), grid, 1)
    return layer_sign(layer) * eps * inner


def mean_from_interface(ut, eta, eps, grid):
    """u- = u~ + (eps^2/3) eta^2 u~_xx."""
    return ut + eps**2 / 3.0 * eta**2 * diff(ut, grid, 2)


def interface_from_mean(ub, eta, eps, grid):
    """u~ = u- - (eps^2/3) eta^2 u-_xx (truncated inverse)."""
    return ub - eps**2 / 3.0 * eta**2 * diff(ub, grid, 2)


# ----------------------------------------------------------------- constraint eliminations

def u1_from_u2(u2t, eta1, eta2, eps, grid):
    """Upper interface velocity from the lower one via the volume constraint.

    Inverts eta1 (1 + (eps^2/3) eta1^2 dxx) u1 = -eta2 (1 + (eps^2/3) eta2^2 dxx) u2
    at O(eps^2).  With zeta_x = eta2_x = -eta1_x and h = eta1 + eta2:

      u1 = -(eta2/eta1) u2 - (eps^2/3)(eta2/eta1)(eta2^2 - eta1^2) u2_xx
           + (2/3) eps^2 h zeta_x u2_x + (eps^2 h/3)(2 zeta_x^2/eta1 + zeta_xx) u2
    """
    h = eta1 + eta2
    zx = diff(eta2, grid, 1)
    zxx = diff(eta2, grid, 2)
    u2x = diff(u2t, grid, 1)
    u2xx = diff(u2t, grid, 2)
    lead = -(eta2 / eta1) * u2t
    corr = (-(eta2 / eta1) * (eta2**2 - eta1**2) * u2xx / 3.0
            + 2.0 / 3.0 * h * zx * u2x
            + h / 3.0 * (2.0 * zx**2 / eta1 + zxx) * u2t)
    return lead + eps**2 * corr


def sigma_from_u2(u2t, eta1, eta2, rho1, rho2, eps, grid):
    """Momentum shear from the lower interface velocity.

    sigma = (psi/eta1) u2 + eps^2 (rho1 eta2 (eta2^2-eta1^2)/(3 eta1)) u2_xx
            - eps^2 ((2/3) rho1 h - (rho1-rho2) eta2) zeta_x u2_x
            + eps^2 (rho1 h/3)(zeta_x^2/eta1 - zeta_xx) u2
    """
    ps = rho1 * eta2 + rho2 * eta1
    h = eta1 + eta2
    zx = diff(eta2, grid, 1)
    zxx = diff(eta2, grid, 2)
    corr = (rho1 * eta2 * (eta2**2 - eta1**2) / (3.0 * eta1) * diff(u2t, grid, 2)
            - (2.0 / 3.0 * rho1 * h - (rho1 - rho2) * eta2) * zx * diff(u2t, grid, 1)
            + rho1 * h / 3.0 * (zx**2 / eta1 - zxx) * u2t)
    return ps / eta1 * u2t + eps**2 * corr


def u2_from_sigma(sigma, eta1, eta2, rho1, rho2, eps, grid):
    """Truncated inverse of :func:`sigma_from_u2`: u2 in terms of sigma."""
    ps = rho1 * eta2 + rho2 * eta1
    h = eta1 + eta2
    zx = diff(eta2, grid, 1)
    zxx = diff(eta2, grid, 2)
    lead = eta1 * sigma / ps
    corr = (-rho1 * eta2 * (eta2**2 - eta1**2) / (3.0 * ps) * diff(lead, grid, 2)
            + eta1 / ps * (2.0 / 3.0 * rho1 * h - (rho1 - rho2) * eta2) * zx * diff(lead, grid, 1)
            - eta1**2 / ps**2 * rho1 * h / 3.0 * (zx**2 / eta1 - zxx) * sigma)
    return lead + eps**2 * corr


def u1_from_sigma(sigma, eta1, eta2, rho1, rho2, eps, grid):
    """Upper interface velocity in terms of sigma.

    The zeta_x factor on the (rho1 - rho2) eta2^2 term and the rho2 eta1^2
    coefficient of zeta_xx follow from substituting u2(sigma) into
    u1(u2); they close the dynamical constraint at O(eps^4).
    """
    ps = rho1 * eta2 + rho2 * eta1
    h = eta1 + eta2
    zx = diff(eta2, grid, 1)
    zxx = diff(eta2, grid, 2)
    lead = eta1 * sigma / ps
    corr = (-rho2 * eta2 * (eta2**2 - eta1**2) / (3.0 * ps) * diff(lead, grid, 2)
            + 2.0 / 3.0 * rho2 * eta1 * h / ps * zx * diff(lead, grid, 1)
            + (rho1 - rho2) * eta2**2 / ps * zx * diff(lead, grid, 1)
            + h / 3.0 * ((3.0 * rho1 * eta2 + 2.0 * rho2 * eta1) / ps**2 * zx**2
                         + rho2 * eta1**2 / ps**2 * zxx) * sigma)
    return -eta2 * sigma / ps + eps**2 * corr


def dynamical_constraint_residual(u1t, u2t, eta1, eta2, eps, grid):
    """eta1 u1 + eta2 u2 + (eps^2/3)(eta1^3 u1_xx + eta2^3 u2_xx); O(eps^4) on
    velocities eliminated through sigma."""
    return (eta1 * u1t + eta2 * u2t
            + eps**2 / 3.0 * (eta1**3 * diff(u1t, grid, 2)
                              + eta2**3 * diff(u2t, grid, 2)))


# ----------------------------------------------------------------- single-layer momentum maps

def mu_from_ubar(ubar, eta, rho, eps, grid):
    """mu = rho (u- - (eps^2/(3 eta)) (eta^3 u-_x)_x)."""
    return rho * (ubar - eps**2 / (3.0 * eta) * diff(eta**3 * diff(ubar, grid, 1), grid, 1))


def ubar_from_mu(mu, eta, rho, eps, grid):
    """Truncated inverse: u- = mu/rho + (eps^2/(3 eta)) (eta^3 (mu/rho)_x)_x."""
    w = mu / rho
    return w + eps**2 / (3.0 * eta) * diff(eta**3 * diff(w, grid, 1), grid, 1)


def m_from_eta_mu(eta, mu):
    """Lie-algebraic momentum m = eta * mu (pointwise)."""
    return eta * mu


def ubar_from_m(m, eta, rho, eps, grid):
    """Exact inversion of m = rho (eta u- - (eps^2/3)(eta^3 u-_x)_x).

    Unlike the asymptotic inverses above, m is defined exactly as a
    variational derivative, so this solves the elliptic problem
    alpha u - (beta u_x)_x = m with alpha = rho eta, beta = rho eps^2 eta^3 / 3
    to residual <= 1e-10 ||m||.
    """
    alpha = rho * eta
    beta = rho * eps**2 * eta**3 / 3.0
    return solve_elliptic(alpha, beta, m, grid)


# ----------------------------------------------------------------- deep-water shear map

def sigma_deepwater_from_u1(u1, eta1, rho1, rho2, h1, delta, grid):
    """sigma = -rho1 u1 + (delta/3) h1 rho2 (eta1 u1)_xx.

    Valid for either the interface or the layer-mean upper velocity; the two
    variants differ at O(delta eps^2).
    """
    return -rho1 * u1 + delta / 3.0 * h1 * rho2 * diff(eta1 * u1, grid, 2)


def u1_deepwater_from_sigma(sigma, eta1, rho1, rho2, h1, delta, grid):
    """Truncated inverse of :func:`sigma_deepwater_from_u1`."""
    lead = -sigma / rho1
    return lead + delta / 3.0 * h1 * rho2 / rho1 * diff(eta1 * lead, grid, 2)


# ----------------------------------------------------------------- constrained momenta

def mu12_from_sigma(sigma, eta1, eta2, rho1, rho2, eps, grid):
    """Constrained elimination of the layer momenta through sigma.

    mu1 = -(rho1 eta2/psi) sigma
          + (eps^2/3)(rho1/psi) d/dx[ (rho2 eta1^3 + rho1 eta2^3)(eta2 sigma/psi)_x
                                      - eta2^3 sigma_x ]
    mu2 = mu1 + sigma  (exactly, by construction).

    On the output, phi1 is untouched and phi2 = O(eps^4).
    """
    ps = rho1 * eta2 + rho2 * eta1
    inner = ((rho2 * eta1**3 + rho1 * eta2**3) * diff(eta2 * sigma / ps, grid, 1)
             - eta2**3 * diff(sigma, grid, 1))
    mu1 = -rho1 * eta2 / ps * sigma + eps**2 / 3.0 * rho1 / ps * diff(inner, grid, 1)
    return mu1, mu1 + sigma


# ----------------------------------------------------------------- velocity triple

class VelocityTriple:
    """Boundary, interface, and layer-mean values of one layer's velocity.

    The three representations are mutually consistent at O(eps^2): each pair
    of transforms above composes to identity + O(eps^4).
    """

    def __init__(self, boundary, interface, mean, layer):
        self.boundary = boundary
        self.interface = interface
        self.mean = mean
        self.layer = layer

    @classmethod
    def from_interface(cls, ut, eta, eps, grid, layer):
        return cls(
            boundary=boundary_from_interface(ut, eta, eps, grid),
            interface=np.asarray(ut, dtype=float),
            mean=mean_from_interface(ut, eta, eps, grid),
            layer=layer,
        )

    def w_interface(self, eta, eps, grid):
        return w_from_interface(self.interface, eta, eps, grid, self.layer)
