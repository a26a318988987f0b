"""Spatial operators on uniform periodic grids.

Spectral (trigonometric-interpolant) derivatives, quadrature, truncated
near-identity inversion, and exact dense elliptic solves.  Derivatives are
spectral rather than finite differences so that the O(eps^4) residuals the
asymptotic-order tests look for are not swamped by discretization error at
n = 128-512.  Products of fields are formed pointwise in physical space
without dealiasing; callers keep test data band-limited (<= 1/3 of the
spectrum).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .core import Grid

_MAX_DIFF_ORDER = 4


@dataclass(frozen=True)
class LinearOperator:
    """A linear map on fields with a human-readable tag."""

    apply: Callable[[np.ndarray], np.ndarray]
    description: str
    n: int

    def __call__(self, f):
        return self.apply(f)


def wavenumbers(grid):
    """Angular wavenumbers 2*pi*k/length matching numpy's rfft layout."""
    return 2.0 * np.pi * np.fft.rfftfreq(grid.n, d=grid.dx)


def diff(f, grid, order=1):
    """Spectral derivative of the trigonometric interpolant of f.

    Exact for resolved Fourier modes.  For odd orders the Nyquist-mode
    derivative is zero by convention (the real interpolant of the sawtooth
    mode is a pure cosine whose odd derivatives vanish on the nodes).

    Parameters
    ----------
    f : array of n nodal values
    grid : Grid
    order : int
        Derivative order, 1 <= order <= 4.
    """
    if not 1 <= order <= _MAX_DIFF_ORDER:
        raise ValueError(f"derivative order must be in 1..{_MAX_DIFF_ORDER}")
    fh = np.fft.rfft(f)
    k = wavenumbers(grid)
    fh *= (1j * k) ** order
    if order % 2 == 1:
        fh[-1] = 0.0
    return np.fft.irfft(fh, n=grid.n)


@lru_cache(maxsize=32)
def _diff_matrix_cached(n, length, order):
    grid = Grid(n, length)
    eye = np.eye(n)
    cols = [diff(eye[:, j], grid, order) for j in range(n)]
    return np.column_stack(cols)


def diff_matrix(grid, order=1):
    """Dense n x n matrix of :func:`diff` (read-only, cached)."""
    mat = _diff_matrix_cached(grid.n, grid.length, order)
    view = mat.view()
    view.setflags(write=False)
    return view


def integrate(f, grid):
    """Periodic trapezoid rule dx * sum(f), spectrally accurate for smooth f.

    Uses exactly-rounded summation, so the result is invariant under
    whole-node translations of f bit for bit.
    """
    return grid.dx * math.fsum(np.asarray(f, dtype=float))


def near_identity_inverse(D, f, eps):
    """Apply the O(eps^2)-truncated inverse of (1 + eps^2 D): f - eps^2 D f.

    The caller is responsible for being in the regime where the truncation
    is meaningful (eps^2 ||D f|| small against ||f||).
    """
    return f - eps**2 * D.apply(f)


class EllipticSolveError(RuntimeError):
    """Dense elliptic solve failed to meet the residual tolerance."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


def elliptic_matrix(alpha, beta, grid):
    """Dense discretization of u -> alpha*u - d/dx(beta * du/dx)."""
    D1 = diff_matrix(grid, 1)
    return np.diag(np.asarray(alpha, dtype=float)) - D1 @ (np.asarray(beta)[:, None] * D1)

def solve_elliptic(alpha, beta, rhs, grid, rtol=1e-10):
    """Solve alpha*u - d/dx(beta * du/dx) = rhs on the periodic grid.

    Dense LU on the n x n discretized operator (n <= 1024 in practice).
    alpha > 0 with beta >= 0 makes the operator symmetric positive definite
    under the discrete L2 pairing, hence uniquely solvable.

    Raises
    ------
    EllipticSolveError
        If the solve fails or the residual exceeds rtol * ||rhs||; the
        exception carries a condition-number estimate.
    """
    rhs = np.asarray(rhs, dtype=float)
    A = elliptic_matrix(alpha, beta, grid)
    try:
        u = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise EllipticSolveError(
            f"singular elliptic operator: {exc}", condition=np.inf
        ) from exc
    scale = np.linalg.norm(rhs)
    residual = np.linalg.norm(A @ u - rhs)
    if not np.all(np.isfinite(u)) or residual > rtol * max(scale, 1e-300):
        cond = float(np.linalg.cond(A))
        raise EllipticSolveError(
            f"elliptic solve residual {residual:.3e} exceeds "
            f"{rtol:.1e} * ||rhs|| = {rtol * scale:.3e}",
            condition=cond,
        )
    return u
