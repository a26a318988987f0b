"""Time integration and diagnostics collection.

Implicit midpoint (fixed-point solve) is the conservative default: the
constant Darboux structures make it symplectic there, so quadratic-ish
invariants oscillate boundedly and linear Casimirs are exact up to solver
tolerance.  For the state-dependent Lie structure midpoint is not
Poisson-exact; energy behavior there is monitored through the
diagnostics, not asserted.  Classical RK4 is the non-symplectic
reference.  Runs are single-threaded and deterministic (identical inputs
give bit-identical outputs on one platform); concurrent runs share no
state.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "implicit_midpoint"          # or "rk4"
    dt: float = 1e-3
    t_end: float = 1.0
    fp_tol: float = 1e-12
    fp_max_iters: int = 100
    diag_every: int = 100
    snapshot_every: int = 0                    # 0 disables snapshots

    def __post_init__(self):
        if self.method not in ("implicit_midpoint", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.dt <= 0 or self.t_end <= 0:
            raise ValueError("dt and t_end must be positive")
        if self.diag_every < 1:
            raise ValueError("diag_every must be >= 1")

    @property
    def n_steps(self):
        return max(1, int(round(self.t_end / self.dt)))


@dataclass(frozen=True)
class DiagnosticsRecord:
    step: int
    time: float
    energy: float
    kinetic: float
    potential: float
    mass: Optional[float]
    momentum: Optional[float]
    constraint_residual: Optional[float]
    fp_iters: Optional[int]


class FixedPointError(RuntimeError):
    """Fixed-point solve of the midpoint equation failed to converge."""

    def __init__(self, iterations, residual, tol):
        super().__init__(
            f"implicit midpoint fixed point: {iterations} iterations, "
            f"residual {residual:.3e} > tol {tol:.3e}")
        self.iterations = iterations
        self.residual = residual


class TimeLoopError(RuntimeError):
    """A step failed; carries the diagnostics collected so far."""

    def __init__(self, message, step, diagnostics, cause):
        super().__init__(f"step {step}: {message}")
        self.step = step
        self.diagnostics = diagnostics
        self.cause = cause


def step_implicit_midpoint(y, rhs, dt, fp_tol=1e-12, fp_max_iters=100):
    """One midpoint step: solve y' = y + dt * rhs((y + y')/2).

    Fixed-point iteration from an explicit Euler predictor; converged when
    the sup-norm update falls below fp_tol * (1 + ||y||_inf).

    Returns (y_new, iterations).
    """
    scale = 1.0 + float(np.max(np.abs(y)))
    current = y + dt * rhs(y)
    for it in range(1, fp_max_iters + 1):
        new = y + dt * rhs(0.5 * (y + current))
        delta = float(np.max(np.abs(new - current)))
        current = new
        if delta <= fp_tol * scale:
            return current, it
    raise FixedPointError(fp_max_iters, delta, fp_tol * scale)


def step_rk4(y, rhs, dt):
    """Classical explicit fourth-order step."""
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * dt * k1)
    k3 = rhs(y + 0.5 * dt * k2)
    k4 = rhs(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class RunResult:
    final_state: np.ndarray
    diagnostics: list
    snapshots: list                  # (step, state array) pairs


def _record(model, y, step, time, fp_iters):
    e = model.energy(y)
    return DiagnosticsRecord(
        step=step,
        time=time,
        energy=e.total,
        kinetic=e.kinetic,
        potential=e.potential,
        mass=model.mass(y) if model.mass is not None else None,
        momentum=model.momentum(y) if model.momentum is not None else None,
        constraint_residual=(model.constraint_residual(y)
                             if model.constraint_residual is not None else None),
        fp_iters=fp_iters,
    )


def run(model, state0, config):
    """Integrate a model from state0 (stacked (k, n) array or model state).

    Diagnostics are recorded at step 0, every config.diag_every steps, and
    at the final step.  Snapshots (full state copies) follow
    config.snapshot_every, plus the initial and final states when enabled.
    On a failing step the collected diagnostics ride along on the raised
    :class:`TimeLoopError`.
    """
    y = np.array(state0 if isinstance(state0, np.ndarray) else state0.as_array(),
                 dtype=float)
    model.check_admissible(y)
    diagnostics = [_record(model, y, 0, 0.0, None)]
    snapshots = [(0, y.copy())] if config.snapshot_every else []
    n_steps = config.n_steps
    fp_iters = None
    for step in range(1, n_steps + 1):
        try:
            if config.method == "implicit_midpoint":
                y, fp_iters = step_implicit_midpoint(
                    y, model.rhs, config.dt, config.fp_tol, config.fp_max_iters)
            else:
                y = step_rk4(y, model.rhs, config.dt)
            model.check_admissible(y)
        except Exception as exc:
            raise TimeLoopError(str(exc), step, diagnostics, exc) from exc
        at_end = step == n_steps
        if step % config.diag_every == 0 or at_end:
            diagnostics.append(_record(model, y, step, step * config.dt, fp_iters))
        if config.snapshot_every and (step % config.snapshot_every == 0 or at_end):
            snapshots.append((step, y.copy()))
    return RunResult(final_state=y, diagnostics=diagnostics, snapshots=snapshots)
