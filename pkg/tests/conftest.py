"""Shared fixtures and helpers for the test suite.

Random fields are band-limited (occupying at most ~1/8 of the spectrum) so
pointwise products stay effectively alias-free, and zero-mean so the
periodic box faithfully stands in for the decaying line.
"""
import numpy as np
import pytest

from stratwave import Grid, PhysicalParams, ScalingRegime

SEED = 20240817


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def grid():
    return Grid(n=256, length=20.0)


@pytest.fixture
def params():
    return PhysicalParams(rho1=1.0, rho2=2.0, h1=1.5, h2=1.0, g=1.0, L=10.0)


@pytest.fixture
def regime(params):
    return ScalingRegime.lower_layer(params)


def band_limited(grid, rng, kmax=None, amplitude=1.0):
    """Random zero-mean field with modes 1..kmax (default n//16)."""
    if kmax is None:
        kmax = max(2, grid.n // 16)
    x = grid.nodes
    f = np.zeros(grid.n)
    for k in range(1, kmax + 1):
        a, b = rng.standard_normal(2) / k
        f += a * np.cos(2 * np.pi * k * x / grid.length)
        f += b * np.sin(2 * np.pi * k * x / grid.length)
    scale = np.max(np.abs(f))
    return amplitude * f / scale if scale > 0 else f


def rel_l2(a, b):
    """Relative discrete-L2 distance of a from b."""
    denom = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / (denom if denom > 0 else 1.0))


def fit_order(eps_values, residuals):
    """Least-squares slope of log(residual) against log(eps)."""
    lx = np.log(np.asarray(eps_values, dtype=float))
    ly = np.log(np.asarray(residuals, dtype=float))
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def ratio_in(value, low, high):
    return low <= value <= high
