"""Verification suites shared by the command-line driver.

Each suite returns a :class:`CheckResult` with a pass flag, a one-line
human-readable detail, and optional named (x, y) series for CSV output.
The acceptance test module exercises the same physics through the public
operations directly; these functions exist so every acceptance criterion
is also runnable as a single CLI invocation.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import dirac, dynamics, models
from .core import (CCFourState, DeepWaterState, Grid, PhysicalParams,
                   ScalingRegime, SGNCanonicalState, TwoLayerState)
from .energetics import (SGNParams, energy_cc_four, energy_deepwater,
                         energy_sgn, energy_two_layer, fd_gradient,
                         grad_cc_four, grad_deepwater, grad_sgn,
                         grad_two_layer)
from .kinematics import (boundary_from_interface, interface_from_boundary,
                         interface_from_mean, m_from_eta_mu,
                         mean_from_interface, mu_from_ubar,
                         sigma_deepwater_from_u1, sigma_from_u2,
                         u1_deepwater_from_sigma, u2_from_sigma, ubar_from_m,
                         ubar_from_mu)
from .specops import diff
from .timeloop import run

EPS_SWEEP = (0.2, 0.1, 0.05)
GRADIENT_FUNCTIONALS = ("two_layer", "sgn_canonical", "deepwater", "cc_four",
                        "restricted")


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    series: dict = field(default_factory=dict)


def band_limited(grid, rng, kmax, amplitude):
    """Random zero-mean field with modes 1..kmax, sup-norm = amplitude."""
    x = grid.nodes
    f = np.zeros(grid.n)
    for k in range(1, kmax + 1):
        a, b = rng.standard_normal(2) / k
        f += a * np.cos(2 * np.pi * k * x / grid.length)
        f += b * np.sin(2 * np.pi * k * x / grid.length)
    peak = np.max(np.abs(f))
    return amplitude * f / peak if peak > 0 else f


def _rel_l2(a, b):
    denom = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / (denom if denom > 0 else 1.0))


def fit_order(x_values, residuals):
    lx = np.log(np.asarray(x_values, dtype=float))
    ly = np.log(np.asarray(residuals, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def gaussian_bump(grid, amplitude, width, center=None):
    x = grid.nodes
    c = grid.length / 2 if center is None else center
    bump = amplitude * np.exp(-((x - c) / width) ** 2)
    return bump - bump.mean()


# ------------------------------------------------------------------ gradients

def gradient_suite(params, grid, rng, functionals=GRADIENT_FUNCTIONALS,
                   eps_values=EPS_SWEEP, n_states=20, tol=1e-6):
    """fd-oracle check of the analytic variational derivatives."""
    kmax = max(2, grid.n // 16)
    worst = {}

    def states(amp=0.1):
        for _ in range(n_states):
            yield (band_limited(grid, rng, kmax, amp),
                   band_limited(grid, rng, kmax, 0.3))

    for eps in eps_values:
        p = replace(params, L=params.h2 / eps)
        regime = ScalingRegime.lower_layer(p)
        if "two_layer" in functionals:
            bad = 0.0
            for zeta, sigma in states():
                s = TwoLayerState(zeta=zeta, sigma=sigma)
                grads = grad_two_layer(s, p, regime, grid)

                def total(z_, s_):
                    return energy_two_layer(TwoLayerState(zeta=z_, sigma=s_),
                                            p, regime, grid).total

                for comp in range(2):
                    bad = max(bad, _rel_l2(
                        grads[comp],
                        fd_gradient(total, (zeta, sigma), comp, grid)))
            worst["two_layer"] = max(worst.get("two_layer", 0.0), bad)
        if "sgn_canonical" in functionals:
            sgn = SGNParams(rho=p.rho2, g=p.g, depth=p.h2, epsilon=eps)
            bad = 0.0
            for deta, mu in states():
                eta = sgn.depth + deta
                grads = grad_sgn(SGNCanonicalState(eta=eta, mu=mu), sgn, grid)

                def total(e_, m_):
                    return energy_sgn(SGNCanonicalState(eta=e_, mu=m_),
                                      sgn, grid).total

                for comp in range(2):
                    bad = max(bad, _rel_l2(
                        grads[comp],
                        fd_gradient(total, (eta, mu), comp, grid)))
            worst["sgn_canonical"] = max(worst.get("sgn_canonical", 0.0), bad)
        if "deepwater" in functionals:
            pdw = PhysicalParams(rho1=max(p.rho1, 0.5), rho2=p.rho2, h1=1.0,
                                 h2=50.0, g=p.g, L=1.0 / eps)
            rdw = ScalingRegime.upper_layer(pdw)
            bad = 0.0
            for dz, sigma in states():
                eta1 = 1.0 + dz
                grads = grad_deepwater(DeepWaterState(eta1=eta1, sigma=sigma),
                                       pdw, rdw, grid)

                def total(e_, s_):
                    return energy_deepwater(DeepWaterState(eta1=e_, sigma=s_),
                                            pdw, rdw, grid).total

                for comp in range(2):
                    bad = max(bad, _rel_l2(
                        grads[comp],
                        fd_gradient(total, (eta1, sigma), comp, grid)))
            worst["deepwater"] = max(worst.get("deepwater", 0.0), bad)
        if "cc_four" in functionals:
            bad = 0.0
            for dz, mu1 in states():
                pressure = band_limited(grid, rng, kmax, 0.2)
                fields = (p.h1 + dz, mu1, p.h2 - dz,
                          band_limited(grid, rng, kmax, 0.3))
                grads = grad_cc_four(CCFourState(*fields), pressure, p, eps,
                                     grid)

                def total(e1, m1, e2, m2):
                    return energy_cc_four(CCFourState(e1, m1, e2, m2),
                                          pressure, p, eps, grid).total

                for comp in range(4):
                    bad = max(bad, _rel_l2(
                        grads[comp],
                        fd_gradient(total, fields, comp, grid)))
            worst["cc_four"] = max(worst.get("cc_four", 0.0), bad)
        if "restricted" in functionals:
            bad = 0.0
            for zeta, sigma in states():
                dz_, ds_ = dirac.grad_restricted_hamiltonian(zeta, sigma, p,
                                                             eps, grid)

                def total(z_, s_):
                    return dirac.restricted_hamiltonian(z_, s_, p, eps, grid)

                bad = max(bad,
                          _rel_l2(dz_, fd_gradient(total, (zeta, sigma), 0,
                                                   grid)),
                          _rel_l2(ds_, fd_gradient(total, (zeta, sigma), 1,
                                                   grid)))
            worst["restricted"] = max(worst.get("restricted", 0.0), bad)

    overall = max(worst.values())
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    return CheckResult("gradient oracle", overall <= tol,
                       f"max rel L2 mismatch {overall:.2e} (tol {tol:g}): "
                       f"{detail}")


# ------------------------------------------------------------------ conservation

def conservation_suite(params, regime, grid, initial, integrator):
    """Midpoint conservation bounds for the two-layer and single-layer
    systems (energy drift <= 1e-8 relative, Casimirs <= 1e-10 absolute)."""
    results = {}
    model = models.two_layer_model(params, regime, grid)
    y0 = np.stack([initial, np.zeros(grid.n)])
    results["two_layer"] = _conservation_numbers(model, y0, integrator)

    sgn = SGNParams(rho=params.rho2, g=params.g, depth=params.h2,
                    epsilon=regime.epsilon)
    model = models.sgn_canonical_model(sgn, grid)
    y0 = np.stack([sgn.depth + initial, np.zeros(grid.n)])
    results["sgn_canonical"] = _conservation_numbers(model, y0, integrator)

    ok = all(drift <= 1e-8 and dm <= 1e-10 and dp <= 1e-10
             for drift, dm, dp in results.values())
    detail = "; ".join(
        f"{name}: |dH|/|H0| {v[0]:.2e}, |d mass| {v[1]:.1e}, |d mom| {v[2]:.1e}"
        for name, v in results.items())
    return CheckResult("conservation", ok, detail)


def _conservation_numbers(model, y0, integrator):
    result = run(model, y0, integrator)
    e = np.array([d.energy for d in result.diagnostics])
    m = np.array([d.mass for d in result.diagnostics])
    p = np.array([d.momentum for d in result.diagnostics])
    return (float(np.abs(e - e[0]).max() / abs(e[0])),
            float(np.abs(m - m[0]).max()),
            float(np.abs(p - p[0]).max()))


# ------------------------------------------------------------------ residual orders

def _trajectory_snapshots(model, y0, integrator):
    conf = replace(integrator,
                   snapshot_every=max(1, integrator.n_steps // 5))
    return run(model, y0, conf).snapshots


def appendix_a_suite(params, grid, integrator, eps_values=EPS_SWEEP):
    """Classical-form residual along canonical trajectories: one ratio per
    epsilon halving, window [11, 21]."""
    eta0 = params.h2 + gaussian_bump(grid, 0.05 * params.h2, grid.length / 27,
                                     center=3 * grid.length / 8)
    mu0 = gaussian_bump(grid, 0.05, grid.length / 27,
                        center=5 * grid.length / 8)
    residuals = []
    for eps in eps_values:
        sgn = SGNParams(rho=params.rho2, g=params.g, depth=params.h2,
                        epsilon=eps)
        model = models.sgn_canonical_model(sgn, grid)
        worst = 0.0
        for _, state in _trajectory_snapshots(model, np.stack([eta0, mu0]),
                                              integrator):
            eta, mu = state
            eta_t, mu_t = dynamics.rhs_sgn_canonical(
                SGNCanonicalState(eta=eta, mu=mu), sgn, grid)
            ubar, ubar_t = dynamics.sgn_ubar_rate(eta, mu, eta_t, mu_t, sgn,
                                                  grid)
            r1, r2 = dynamics.residual_sgn_classic(eta, ubar, eta_t, ubar_t,
                                                   sgn, grid)
            worst = max(worst, float(np.linalg.norm(r1) + np.linalg.norm(r2)))
        residuals.append(worst)
    ratios = [residuals[i] / residuals[i + 1] for i in range(len(residuals) - 1)]
    order = fit_order(eps_values, residuals)
    ok = all(11.0 <= q <= 21.0 for q in ratios)
    return CheckResult(
        "single-layer equivalence", ok,
        f"observed order {order:.2f}, ratios "
        + ", ".join(f"{q:.1f}" for q in ratios) + " (window [11, 21])",
        series={"convergence_appendix_a": list(zip(eps_values, residuals))})


def boussinesq_suite(params, grid, integrator, deltas=(0.1, 0.05, 0.025)):
    """Deep-water checks: dispersionless match of the shallow system and the
    O(delta^2) Boussinesq residuals along trajectories (ratio 4 +/- 30%)."""
    rng = np.random.default_rng(0)
    rho1 = params.rho1 if params.rho1 > 0 else 0.9

    # (a) delta = 0 reduction
    p0 = PhysicalParams(rho1=rho1, rho2=params.rho2, h1=1.0, h2=50.0,
                        g=params.g, L=1e9)
    r0 = ScalingRegime.upper_layer(p0)
    eta1 = 1.0 + band_limited(grid, rng, 8, 0.1)
    ubar = band_limited(grid, rng, 8, 0.3)
    s = DeepWaterState(eta1=eta1, sigma=-p0.rho1 * ubar)
    et, st = dynamics.rhs_deepwater(s, p0, r0, grid)
    mismatch = max(
        _rel_l2(et, -p0.h1 * diff(eta1 * ubar, grid, 1)),
        _rel_l2(-st / p0.rho1,
                -p0.h1 * ubar * diff(ubar, grid, 1)
                - p0.g * p0.h1**2 * (p0.rho2 / p0.rho1 - 1.0)
                * diff(eta1, grid, 1)))

    # (b) residual order along trajectories
    eta1_0 = 1.0 + gaussian_bump(grid, 0.05, grid.length / 27,
                                 center=3 * grid.length / 8)
    sigma_0 = gaussian_bump(grid, 0.1, grid.length / 27,
                            center=5 * grid.length / 8)
    residuals = []
    for delta in deltas:
        pb = PhysicalParams(rho1=rho1, rho2=params.rho2, h1=1.0, h2=50.0,
                            g=params.g, L=1.0 / delta)
        rb = ScalingRegime.upper_layer(pb, a_exponent=1.0)
        model = models.deepwater_model(pb, rb, grid)
        worst = 0.0
        for _, state in _trajectory_snapshots(model,
                                              np.stack([eta1_0, sigma_0]),
                                              integrator):
            e1s, sgs = state
            e1t, sgt = dynamics.rhs_deepwater(
                DeepWaterState(eta1=e1s, sigma=sgs), pb, rb, grid)
            ub, ubt = dynamics.deepwater_ubar_rate(e1s, sgs, e1t, sgt, pb, rb,
                                                   grid)
            ett = dynamics.deepwater_eta1_tt(e1s, sgs, e1t, sgt, pb, rb, grid)
            _, r2, r2f = dynamics.residual_boussinesq(e1s, ub, e1t, ubt, pb,
                                                      rb, grid, eta1_tt=ett)
            worst = max(worst, float(np.linalg.norm(r2) + np.linalg.norm(r2f)))
        residuals.append(worst)
    ratios = [residuals[i] / residuals[i + 1] for i in range(len(residuals) - 1)]
    ok = mismatch <= 1e-8 and all(2.8 <= q <= 5.2 for q in ratios)
    return CheckResult(
        "deep-water family", ok,
        f"dispersionless match {mismatch:.1e} (tol 1e-8), residual ratios "
        + ", ".join(f"{q:.2f}" for q in ratios) + " (window 4 +/- 30%)",
        series={"convergence_boussinesq": list(zip(deltas, residuals))})


def dirac_identity_suite(params, epsilon, rng, n_geometries=10):
    grid = Grid(n=64, length=10.0)
    defects = [dirac.dirac_block_identity(params, epsilon, grid, rng)[1]
               for _ in range(n_geometries)]
    _, control = dirac.dirac_block_identity(params, epsilon, grid, rng,
                                            corrupt_b=True)
    ok = max(defects) <= 1e-10 and control >= 1e-2
    return CheckResult(
        "constraint-block reduction", ok,
        f"max defect {max(defects):.1e} over {n_geometries} geometries "
        f"(tol 1e-10), negative control {control:.1e} (>= 1e-2)")


def restricted_identity_suite(params, regime, grid, rng, n_states=20):
    kmax = max(2, grid.n // 16)
    pairs = []
    for _ in range(n_states):
        zeta = band_limited(grid, rng, kmax, 0.1 * min(params.h1, params.h2))
        sigma = band_limited(grid, rng, kmax, 0.3)
        a = dirac.restricted_hamiltonian(zeta, sigma, params, regime.epsilon,
                                         grid)
        b = energy_two_layer(TwoLayerState(zeta=zeta, sigma=sigma), params,
                             regime, grid).total
        pairs.append((a, b))
    c, residual = dirac.fit_energy_scale(pairs)
    ok = residual <= 1e-8
    return CheckResult(
        "restricted Hamiltonian identity", ok,
        f"fitted scale {c:.12g}, max rel residual {residual:.1e} (tol 1e-8)")


def propagation_suite(params, grid, initial, integrator,
                      eps_values=EPS_SWEEP):
    """Constraint propagation along two-layer trajectories: phi1 at machine
    precision, max ||phi2|| scaling as eps^4 and bounded in time."""
    maxima = []
    phi1_worst = 0.0
    bounded = True
    for eps in eps_values:
        p = replace(params, L=params.h2 / eps)
        regime = ScalingRegime.lower_layer(p)
        model = models.two_layer_model(p, regime, grid)
        y0 = np.stack([initial, np.zeros(grid.n)])
        conf = replace(integrator,
                       snapshot_every=max(1, integrator.n_steps // 40))
        result = run(model, y0, conf)
        states = [(s[0], s[1]) for _, s in result.snapshots]
        out = dirac.check_constraint_propagation(states, p, eps, grid)
        phi1_worst = max(phi1_worst, out["max_phi1"])
        maxima.append(out["max_phi2"])
        series = out["phi2"]
        half = len(series) // 2
        bounded = bounded and series[half:].max() <= 3.0 * series[:half].max()
    ratios = [maxima[i] / maxima[i + 1] for i in range(len(maxima) - 1)]
    ok = (phi1_worst <= 1e-12 and bounded
          and all(11.0 <= q <= 21.0 for q in ratios))
    return CheckResult(
        "constraint propagation", ok,
        f"max |phi1| {phi1_worst:.1e}, phi2 ratios "
        + ", ".join(f"{q:.1f}" for q in ratios)
        + " (window [11, 21]), bounded in time",
        series={"convergence_phi2": list(zip(eps_values, maxima))})


def roundtrip_suite(grid, rng, eps_values=EPS_SWEEP, min_order=3.7):
    """Forward/inverse composition orders for every transform pair."""
    eta = 1.0 + band_limited(grid, rng, 8, 0.15)
    eta1 = 1.3 + band_limited(grid, rng, 8, 0.1)
    eta2 = 2.5 - eta1
    u = band_limited(grid, rng, 8, 1.0)
    sig = band_limited(grid, rng, 8, 1.0)
    rho1, rho2 = 1.0, 2.0
    orders = {}

    def order_of(name, residual_fn):
        orders[name] = fit_order(eps_values,
                                 [residual_fn(e) for e in eps_values])

    order_of("interface<->boundary", lambda e: np.linalg.norm(
        interface_from_boundary(boundary_from_interface(u, eta, e, grid),
                                eta, e, grid) - u))
    order_of("boundary<->interface", lambda e: np.linalg.norm(
        boundary_from_interface(interface_from_boundary(u, eta, e, grid),
                                eta, e, grid) - u))
    order_of("mean<->interface", lambda e: np.linalg.norm(
        mean_from_interface(interface_from_mean(u, eta, e, grid),
                            eta, e, grid) - u))
    order_of("interface<->mean", lambda e: np.linalg.norm(
        interface_from_mean(mean_from_interface(u, eta, e, grid),
                            eta, e, grid) - u))
    order_of("mu<->ubar", lambda e: np.linalg.norm(
        mu_from_ubar(ubar_from_mu(u, eta, rho2, e, grid), eta, rho2, e, grid)
        - u))
    order_of("ubar<->mu", lambda e: np.linalg.norm(
        ubar_from_mu(mu_from_ubar(u, eta, rho2, e, grid), eta, rho2, e, grid)
        - u))
    order_of("sigma<->u2", lambda e: np.linalg.norm(
        sigma_from_u2(u2_from_sigma(sig, eta1, eta2, rho1, rho2, e, grid),
                      eta1, eta2, rho1, rho2, e, grid) - sig))
    order_of("u2<->sigma", lambda e: np.linalg.norm(
        u2_from_sigma(sigma_from_u2(u, eta1, eta2, rho1, rho2, e, grid),
                      eta1, eta2, rho1, rho2, e, grid) - u))
    order_of("deepwater sigma<->u1", lambda e: np.linalg.norm(
        sigma_deepwater_from_u1(
            u1_deepwater_from_sigma(sig, eta, rho1, rho2, 1.0, e**2, grid),
            eta, rho1, rho2, 1.0, e**2, grid) - sig))

    params = PhysicalParams(rho1=rho1, rho2=rho2, h1=1.3, h2=1.2, g=1.0,
                            L=10.0)

    def phi2_residual(e):
        cc = dirac.reconstruct_constrained(1.3 - eta1, sig, params, e, grid)
        return dirac.constraints(cc, params, e, grid).max_abs()[1]

    order_of("constrained momenta", phi2_residual)

    mu = band_limited(grid, rng, 8, 1.0)
    m = m_from_eta_mu(eta, mu)
    exact_chain = _rel_l2(
        mu_from_ubar(ubar_from_m(m, eta, rho2, 0.15, grid), eta, rho2, 0.15,
                     grid), mu)

    bad = {k: v for k, v in orders.items() if v < min_order}
    ok = not bad and exact_chain <= 1e-9
    detail = ", ".join(f"{k} {v:.2f}" for k, v in orders.items())
    return CheckResult("transform round trips", ok,
                       f"orders (>= {min_order}): {detail}; exact m-chain "
                       f"{exact_chain:.1e}")


# ------------------------------------------------------------------ limit sweeps

def air_water_sweep(params, grid, rng, epsilon=0.1, k_range=range(1, 7)):
    kmax = max(2, grid.n // 16)
    zeta = band_limited(grid, rng, kmax, 0.1)
    sigma = band_limited(grid, rng, kmax, 0.1)
    gaps = []
    for k in k_range:
        p = PhysicalParams(rho1=10.0**-k * params.rho2, rho2=params.rho2,
                           h1=10.0 ** (k / 2), h2=1.0, g=params.g,
                           L=1.0 / epsilon)
        r = ScalingRegime.lower_layer(p)
        e2 = energy_two_layer(TwoLayerState(zeta=zeta, sigma=sigma), p, r,
                              grid).total
        sgn = SGNParams(rho=p.rho2, g=p.g, depth=1.0, epsilon=epsilon)
        e1 = energy_sgn(SGNCanonicalState(eta=1.0 + zeta, mu=sigma), sgn,
                        grid).total
        gaps.append((k, abs(e2 - e1) / abs(e1)))
    monotone = all(a[1] > b[1] for a, b in zip(gaps, gaps[1:]))
    ok = monotone and gaps[-1][1] <= 1e-3
    return CheckResult(
        "air-water limit", ok,
        "gaps " + " > ".join(f"{g:.1e}" for _, g in gaps)
        + f", monotone={monotone}, final <= 1e-3",
        series={"air_water": gaps})


def deep_water_sweep(params, grid, rng, k_range=range(1, 7)):
    kmax = max(2, grid.n // 16)
    zeta = band_limited(grid, rng, kmax, 0.1)
    sigma = band_limited(grid, rng, kmax, 0.1)
    rho1 = params.rho1 if params.rho1 > 0 else 0.9
    gaps = []
    for k in k_range:
        h2 = 10.0**k
        p = PhysicalParams(rho1=rho1, rho2=params.rho2, h1=1.0, h2=h2,
                           g=params.g, L=h2)
        r = ScalingRegime.upper_layer(p, a_exponent=1.0)
        e2 = energy_two_layer(TwoLayerState(zeta=zeta, sigma=sigma), p, r,
                              grid).total
        edw = energy_deepwater(DeepWaterState(eta1=1.0 - zeta, sigma=sigma),
                               p, r, grid).total
        gaps.append((k, abs(e2 - edw) / abs(edw)))
    monotone = all(a[1] > b[1] for a, b in zip(gaps, gaps[1:]))
    return CheckResult(
        "deep-water limit", monotone,
        "gaps " + " > ".join(f"{g:.1e}" for _, g in gaps)
        + f", monotone={monotone}",
        series={"deep_water": gaps})
