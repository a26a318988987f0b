"""Physical parameters, scaling regimes, grids, and model state containers.

Every other module operates on the plain values defined here.  Fields are
one-dimensional float64 numpy arrays of nodal values on a uniform periodic
grid; states are frozen containers of such fields.  All simulations run in
nondimensional variables: horizontal lengths are measured in units of the
horizontal scale L, vertical lengths in units of the layer height selected
by the scaling regime (lower-layer height h2 or upper-layer height h1).
Dimensional prefactors that the model formulas carry explicitly (powers of
h1, h2) are kept as written so that coded energies match the displayed
expressions literally.

All containers are plain immutable values after construction (arrays are
frozen), so they are safe to share across threads; no module here keeps
mutable global state.  Only the reduced one-dimensional variables are
represented: the parent two-dimensional fields (bulk density, weighted
vorticity, streamfunction, Clebsch potentials) stay out of scope.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, fields

import numpy as np

#: Minimum admissible layer thickness.  The long-wave models are derived for
#: non-vanishing layers; states that pinch below this floor abort with an
#: AdmissibilityError instead of producing NaNs downstream.
THICKNESS_FLOOR = 1e-8


class AdmissibilityError(ValueError):
    """A layer thickness dropped to (or below) the admissibility floor."""

    def __init__(self, message, node=None, value=None):
        super().__init__(message)
        self.node = node
        self.value = value


def as_field(values, n=None, name="field"):
    """Validate nodal data: 1-D, float64, finite, optionally of length n."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"{name} has {arr.shape[0]} nodes, expected {n}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"{name} contains a non-finite entry at node {bad}")
    return arr


@dataclass(frozen=True)
class PhysicalParams:
    """Densities, asymptotic layer heights, gravity, and horizontal scale.

    Parameters
    ----------
    rho1, rho2 : float
        Mass densities of the upper and lower fluid.  Stable stratification
        requires rho2 > rho1 >= 0 (rho1 = 0 is the air-water limit).
    h1, h2 : float
        Asymptotic thicknesses of the upper and lower layer.
    g : float
        Gravitational acceleration.
    L : float
        Typical horizontal scale (wavelength); the dial for the long-wave
        expansion parameters.
    """

    rho1: float
    rho2: float
    h1: float
    h2: float
    g: float = 1.0
    L: float = 10.0

    def __post_init__(self):
        if not (self.rho2 > self.rho1 >= 0.0):
            raise ValueError(
                f"stable stratification requires rho2 > rho1 >= 0, "
                f"got rho1={self.rho1}, rho2={self.rho2}"
            )
        for name in ("h1", "h2", "g", "L"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")


class VerticalScale(enum.Enum):
    """Which layer height nondimensionalizes the vertical coordinate."""

    LOWER_LAYER = "lower"   # z scaled by h2; eps = h2 / L
    UPPER_LAYER = "upper"   # z scaled by h1; eps = h1 / L


@dataclass(frozen=True)
class ScalingRegime:
    """Long-wave expansion bookkeeping: epsilon, and delta = eps^(2-a).

    The deep-water regime (UPPER_LAYER) carries the extra exponent a in
    [0, 1]; its expansion parameter is delta = epsilon^(2-a).  For the
    lower-layer scaling a plays no role and delta is never used.
    """

    vertical_scale: VerticalScale
    epsilon: float
    a_exponent: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be strictly positive")
        if not 0.0 <= self.a_exponent <= 1.0:
            raise ValueError("a_exponent must lie in [0, 1]")

    @classmethod
    def lower_layer(cls, params):
        """Regime with z scaled by h2 (two-layer and air-water models)."""
        return cls(VerticalScale.LOWER_LAYER, params.h2 / params.L)

    @classmethod
    def upper_layer(cls, params, a_exponent=1.0):
        """Regime with z scaled by h1 (deep-water family)."""
        return cls(VerticalScale.UPPER_LAYER, params.h1 / params.L, a_exponent)

    @property
    def delta(self):
        """Deep-water expansion parameter epsilon^(2 - a)."""
        return self.epsilon ** (2.0 - self.a_exponent)

    def matches(self, params, tol=1e-15):
        """Check epsilon against the vertical-to-horizontal scale ratio."""
        if self.vertical_scale is VerticalScale.LOWER_LAYER:
            ratio = params.h2 / params.L
        else:
            ratio = params.h1 / params.L
        return abs(self.epsilon - ratio) <= tol * max(1.0, abs(ratio))


def height_ratios(params, regime):
    """Nondimensional rest heights (H1, H2) and total height h = H1 + H2.

    LOWER_LAYER: H1 = h1/h2, H2 = 1.  UPPER_LAYER: H1 = 1, H2 = h2/h1.
    """
    if regime.vertical_scale is VerticalScale.LOWER_LAYER:
        H1 = params.h1 / params.h2
        H2 = 1.0
    else:
        H1 = 1.0
        H2 = params.h2 / params.h1
    return H1, H2, H1 + H2


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid: n nodes on [0, length), node i at i*dx.

    n must be even (a power of two is recommended) so the spectral module
    has an unambiguous Nyquist mode.
    """

    n: int
    length: float

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 8, got {self.n}")
        if not self.length > 0.0:
            raise ValueError("grid length must be strictly positive")

    @property
    def dx(self):
        return self.length / self.n

    @property
    def nodes(self):
        return np.arange(self.n) * self.dx


def thicknesses(zeta, params, regime):
    """Layer thicknesses from the interface displacement.

    LOWER_LAYER: eta1 = h1/h2 - zeta, eta2 = 1 + zeta.
    UPPER_LAYER: eta1 = 1 - zeta,     eta2 = h2/h1 + zeta.

    Raises
    ------
    AdmissibilityError
        If any thickness does not exceed THICKNESS_FLOOR; the message names
        the first offending node.
    """
    zeta = as_field(zeta, name="zeta")
    H1, H2, _ = height_ratios(params, regime)
    eta1 = H1 - zeta
    eta2 = H2 + zeta
    for name, eta in (("eta1", eta1), ("eta2", eta2)):
        if np.any(eta <= THICKNESS_FLOOR):
            node = int(np.argmin(eta))
            raise AdmissibilityError(
                f"{name} = {eta[node]:.3e} <= {THICKNESS_FLOOR:.0e} "
                f"at node {node}: layer thickness degenerated",
                node=node,
                value=float(eta[node]),
            )
    return eta1, eta2


def psi(eta1, eta2, params):
    """Weighted mass density rho1*eta2 + rho2*eta1 (pointwise positive)."""
    return params.rho1 * eta2 + params.rho2 * eta1


def _check_positive_thickness(arr, name):
    if np.any(arr <= THICKNESS_FLOOR):
        node = int(np.argmin(arr))
        raise AdmissibilityError(
            f"{name} = {arr[node]:.3e} <= {THICKNESS_FLOOR:.0e} at node {node}",
            node=node,
            value=float(arr[node]),
        )


class _StateBase:
    """Shared machinery for the model state containers."""

    def __post_init__(self):
        arrays = []
        n = None
        for f in fields(self):
            arr = as_field(getattr(self, f.name), n=n, name=f.name)
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, f.name, arr)
            n = arr.shape[0]
            arrays.append(arr)
        self._validate()

    def _validate(self):
        pass

    @property
    def n(self):
        return getattr(self, self.field_names[0]).shape[0]

    def as_array(self):
        """Stack components into a (k, n) array for the time integrator."""
        return np.stack([getattr(self, f) for f in self.field_names])

    @classmethod
    def from_array(cls, arr):
        return cls(*arr)

    def to_dict(self):
        """Plain-python representation; floats survive a JSON round trip
        bit-exactly (shortest-repr serialization)."""
        return {
            "kind": type(self).__name__,
            **{f: [float(v) for v in getattr(self, f)] for f in self.field_names},
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("kind") != cls.__name__:
            raise ValueError(f"expected kind {cls.__name__}, got {data.get('kind')}")
        return cls(*(np.array(data[f], dtype=float) for f in cls.field_names))


@dataclass(frozen=True)
class TwoLayerState(_StateBase):
    """Reduced two-layer state: interface displacement and momentum shear.

    Admissibility (positive thicknesses) depends on the scaling regime and
    is enforced by :func:`thicknesses`, not by the container.
    """

    zeta: np.ndarray
    sigma: np.ndarray
    field_names = ("zeta", "sigma")


@dataclass(frozen=True)
class SGNCanonicalState(_StateBase):
    """Canonical water-wave state (eta, mu): depth and momentum density."""

    eta: np.ndarray
    mu: np.ndarray
    field_names = ("eta", "mu")

    def _validate(self):
        _check_positive_thickness(self.eta, "eta")


@dataclass(frozen=True)
class SGNClassicState(_StateBase):
    """Lie-algebraic water-wave state (eta, m) with m = eta * mu."""

    eta: np.ndarray
    m: np.ndarray
    field_names = ("eta", "m")

    def _validate(self):
        _check_positive_thickness(self.eta, "eta")


@dataclass(frozen=True)
class DeepWaterState(_StateBase):
    """Deep-water (large lower layer) state: upper thickness and shear."""

    eta1: np.ndarray
    sigma: np.ndarray
    field_names = ("eta1", "sigma")

    def _validate(self):
        _check_positive_thickness(self.eta1, "eta1")


@dataclass(frozen=True)
class CCFourState(_StateBase):
    """Four-field two-layer state (eta1, mu1, eta2, mu2)."""

    eta1: np.ndarray
    mu1: np.ndarray
    eta2: np.ndarray
    mu2: np.ndarray
    field_names = ("eta1", "mu1", "eta2", "mu2")

    def _validate(self):
        _check_positive_thickness(self.eta1, "eta1")
        _check_positive_thickness(self.eta2, "eta2")


STATE_KINDS = {
    cls.__name__: cls
    for cls in (TwoLayerState, SGNCanonicalState, SGNClassicState,
                DeepWaterState, CCFourState)
}


def state_from_dict(data):
    """Inverse of ``state.to_dict()`` for any registered state kind."""
    try:
        cls = STATE_KINDS[data["kind"]]
    except KeyError:
        raise ValueError(f"unknown state kind {data.get('kind')!r}") from None
    return cls.from_dict(data)
