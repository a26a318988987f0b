"""Poisson structures, right-hand sides, and residual evaluators."""
import numpy as np
import pytest

from stratwave import (CCFourState, DeepWaterState, Grid, PhysicalParams,
                       ScalingRegime, SGNCanonicalState, SGNClassicState,
                       SGNParams, TwoLayerState, fd_gradient, integrate)
from stratwave.dynamics import (darboux_pair, darboux_quad,
                                deepwater_eta1_tt, deepwater_ubar_rate,
                                residual_boussinesq, residual_sgn_classic,
                                rhs_cc_four, rhs_deepwater, rhs_sgn_canonical,
                                rhs_sgn_classic_m, rhs_two_layer, sgn_lie,
                                sgn_ubar_rate)
from stratwave import energy_deepwater, energy_two_layer
from stratwave.kinematics import m_from_eta_mu
from stratwave.specops import diff

from conftest import band_limited, fit_order, rel_l2

EPS_SWEEP = [0.2, 0.1, 0.05]


def pairing(a, b, grid):
    return sum(integrate(ai * bi, grid) for ai, bi in zip(a, b))


def two_layer_params(eps):
    return PhysicalParams(rho1=1.0, rho2=2.0, h1=1.5, h2=1.0, g=1.0, L=1.0 / eps)


class TestPoissonStructures:
    def test_darboux_pair_skew(self, grid, rng):
        P = darboux_pair(grid)
        a = np.stack([band_limited(grid, rng) for _ in range(2)])
        b = np.stack([band_limited(grid, rng) for _ in range(2)])
        lhs = pairing(a, P.apply(None, b), grid)
        rhs = pairing(b, P.apply(None, a), grid)
        assert abs(lhs + rhs) <= 1e-10 * max(abs(lhs), 1.0)

    def test_darboux_quad_skew(self, grid, rng):
        P = darboux_quad(grid)
        a = np.stack([band_limited(grid, rng) for _ in range(4)])
        b = np.stack([band_limited(grid, rng) for _ in range(4)])
        lhs = pairing(a, P.apply(None, b), grid)
        rhs = pairing(b, P.apply(None, a), grid)
        assert abs(lhs + rhs) <= 1e-10 * max(abs(lhs), 1.0)

    def test_sgn_lie_skew(self, grid, rng):
        P = sgn_lie(grid)
        state = np.stack([1.0 + band_limited(grid, rng, amplitude=0.2),
                          band_limited(grid, rng)])
        a = np.stack([band_limited(grid, rng) for _ in range(2)])
        b = np.stack([band_limited(grid, rng) for _ in range(2)])
        lhs = pairing(a, P.apply(state, b), grid)
        rhs = pairing(b, P.apply(state, a), grid)
        assert abs(lhs + rhs) <= 1e-10 * max(abs(lhs), 1.0)

    def test_sgn_lie_jacobi_cyclic_sum(self, rng):
        # {F_a, F_b} is again linear with gradient
        # e(a,b) = (b2 a1_x - a2 b1_x, b2 a2_x - a2 b2_x); the Jacobi
        # identity is the vanishing cyclic sum of <e(a,b), P(s) c>
        g = Grid(n=32, length=10.0)
        P = sgn_lie(g)
        state = np.stack([1.0 + band_limited(g, rng, amplitude=0.2),
                          band_limited(g, rng)])

        def e(a, b):
            return np.stack([
                b[1] * diff(a[0], g, 1) - a[1] * diff(b[0], g, 1),
                b[1] * diff(a[1], g, 1) - a[1] * diff(b[1], g, 1)])

        a, b, c = (np.stack([band_limited(g, rng), band_limited(g, rng)])
                   for _ in range(3))
        total = (pairing(e(a, b), P.apply(state, c), g)
                 + pairing(e(b, c), P.apply(state, a), g)
                 + pairing(e(c, a), P.apply(state, b), g))
        scale = max(abs(pairing(e(a, b), P.apply(state, c), g)), 1e-30)
        assert abs(total) <= 1e-8 * max(scale, 1.0)


class TestTwoLayerRHS:
    def test_rest_state_equilibrium(self, grid):
        p = two_layer_params(0.1)
        r = ScalingRegime.lower_layer(p)
        s = TwoLayerState(zeta=np.zeros(grid.n), sigma=np.zeros(grid.n))
        zt, st = rhs_two_layer(s, p, r, grid)
        assert np.max(np.abs(zt)) == 0.0
        assert np.max(np.abs(st)) == 0.0

    def test_constant_state_is_steady(self, grid):
        p = two_layer_params(0.1)
        r = ScalingRegime.lower_layer(p)
        s = TwoLayerState(zeta=np.full(grid.n, 0.05), sigma=np.full(grid.n, 0.4))
        zt, st = rhs_two_layer(s, p, r, grid)
        assert np.max(np.abs(zt)) <= 1e-12
        assert np.max(np.abs(st)) <= 1e-12

    def test_matches_poisson_applied_to_fd_gradient(self, grid, rng):
        p = two_layer_params(0.1)
        r = ScalingRegime.lower_layer(p)
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.1)
        s = TwoLayerState(zeta=zeta, sigma=sigma)

        def total(z_, s_):
            return energy_two_layer(TwoLayerState(zeta=z_, sigma=s_),
                                    p, r, grid).total

        fd = np.stack([fd_gradient(total, (zeta, sigma), 0, grid),
                       fd_gradient(total, (zeta, sigma), 1, grid)])
        expected = darboux_pair(grid).apply(None, fd)
        zt, st = rhs_two_layer(s, p, r, grid)
        assert rel_l2(np.stack([zt, st]), expected) <= 1e-6

    def test_casimirs_annihilated(self, grid, rng):
        p = two_layer_params(0.1)
        r = ScalingRegime.lower_layer(p)
        s = TwoLayerState(zeta=band_limited(grid, rng, amplitude=0.1),
                          sigma=band_limited(grid, rng, amplitude=0.1))
        zt, st = rhs_two_layer(s, p, r, grid)
        assert abs(integrate(zt, grid)) <= 1e-12
        assert abs(integrate(st, grid)) <= 1e-12

    def test_translation_equivariance(self, grid, rng):
        p = two_layer_params(0.1)
        r = ScalingRegime.lower_layer(p)
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.1)
        zt, st = rhs_two_layer(TwoLayerState(zeta=zeta, sigma=sigma), p, r, grid)
        shift = 19
        zt2, st2 = rhs_two_layer(TwoLayerState(zeta=np.roll(zeta, shift),
                                               sigma=np.roll(sigma, shift)),
                                 p, r, grid)
        assert rel_l2(zt2, np.roll(zt, shift)) <= 1e-12
        assert rel_l2(st2, np.roll(st, shift)) <= 1e-12

    def test_linearization_about_rest_is_oscillatory(self, grid):
        # zeta_tt = -A B k^2 zeta for the k-mode: both transfer
        # coefficients positive means stable wave propagation
        p = two_layer_params(0.1)
        r = ScalingRegime.lower_layer(p)
        k = 2 * np.pi / grid.length
        a = 1e-6
        mode = np.cos(k * grid.nodes)
        _, st = rhs_two_layer(TwoLayerState(zeta=a * mode,
                                            sigma=np.zeros(grid.n)), p, r, grid)
        proj_b = integrate(st * np.sin(k * grid.nodes), grid) / a
        zt, _ = rhs_two_layer(TwoLayerState(zeta=np.zeros(grid.n),
                                            sigma=a * mode), p, r, grid)
        proj_a = integrate(zt * np.sin(k * grid.nodes), grid) / a
        assert proj_a > 0 and proj_b > 0


class TestSGNCanonicalRHS:
    def make(self, eps=0.1):
        return SGNParams(rho=1.0, g=1.0, depth=1.0, epsilon=eps)

    def test_rest_zero(self, grid):
        p = self.make()
        s = SGNCanonicalState(eta=np.ones(grid.n), mu=np.zeros(grid.n))
        et, mt = rhs_sgn_canonical(s, p, grid)
        assert np.max(np.abs(et)) == 0.0
        assert np.max(np.abs(mt)) == 0.0

    def test_uniform_flow_steady(self, grid):
        p = self.make()
        s = SGNCanonicalState(eta=np.full(grid.n, 1.2), mu=np.full(grid.n, 0.7))
        et, mt = rhs_sgn_canonical(s, p, grid)
        assert np.max(np.abs(et)) <= 1e-12
        assert np.max(np.abs(mt)) <= 1e-12

    def test_dual_path_assembly(self, grid, rng):
        # hand-expanded rhs vs -(1/h^2) d/dx of the analytic gradient
        from stratwave import grad_sgn

        p = SGNParams(rho=1.3, g=0.9, depth=1.1, epsilon=0.15)
        s = SGNCanonicalState(eta=p.depth + band_limited(grid, rng, amplitude=0.1),
                              mu=band_limited(grid, rng))
        de, dm = grad_sgn(s, p, grid)
        expected = (-diff(dm, grid, 1) / p.depth**2,
                    -diff(de, grid, 1) / p.depth**2)
        et, mt = rhs_sgn_canonical(s, p, grid)
        assert rel_l2(et, expected[0]) <= 1e-10
        assert rel_l2(mt, expected[1]) <= 1e-10


class TestSGNClassicRHS:
    def test_rest_zero(self, grid):
        p = SGNParams(rho=1.0, g=1.0, depth=1.0, epsilon=0.1)
        s = SGNClassicState(eta=np.ones(grid.n), m=np.zeros(grid.n))
        et, mt = rhs_sgn_classic_m(s, p, grid)
        assert np.max(np.abs(et)) <= 1e-12
        assert np.max(np.abs(mt)) <= 1e-12

    def test_mass_in_divergence_form(self, grid, rng):
        p = SGNParams(rho=1.2, g=1.0, depth=1.0, epsilon=0.12)
        s = SGNClassicState(eta=1.0 + band_limited(grid, rng, amplitude=0.15),
                            m=band_limited(grid, rng))
        et, _ = rhs_sgn_classic_m(s, p, grid)
        assert abs(integrate(et, grid)) <= 1e-12

    def test_cross_check_vs_canonical_fourth_order(self, grid, rng):
        eta = 1.0 + band_limited(grid, rng, amplitude=0.15)
        mu = band_limited(grid, rng)
        gaps = []
        for eps in EPS_SWEEP:
            p = SGNParams(rho=1.0, g=1.0, depth=1.0, epsilon=eps)
            canon = SGNCanonicalState(eta=eta, mu=mu)
            et_c, mt_c = rhs_sgn_canonical(canon, p, grid)
            classic = SGNClassicState(eta=eta, m=m_from_eta_mu(eta, mu))
            et_l, mt_l = rhs_sgn_classic_m(classic, p, grid)
            # transform canonical rates into (eta, m) rates
            mt_from_canon = eta * mt_c + et_c * mu
            gaps.append(np.linalg.norm(et_l - et_c)
                        + np.linalg.norm(mt_l - mt_from_canon))
        assert fit_order(EPS_SWEEP, gaps) >= 3.5


class TestDeepWaterRHS:
    def make(self, eps=0.1, a=1.0):
        p = PhysicalParams(rho1=0.9, rho2=2.0, h1=1.0, h2=50.0, g=1.0, L=1.0 / eps)
        return p, ScalingRegime.upper_layer(p, a_exponent=a)

    def test_rest_zero(self, grid):
        p, r = self.make()
        s = DeepWaterState(eta1=np.ones(grid.n), sigma=np.zeros(grid.n))
        et, st = rhs_deepwater(s, p, r, grid)
        assert np.max(np.abs(et)) == 0.0
        assert np.max(np.abs(st)) == 0.0

    def test_dispersionless_matches_shallow_system(self, grid, rng):
        # delta = 0: after sigma = -rho1 ubar1, the rhs reproduces
        # eta1_t = -h1 (eta1 u)_x, u_t = -h1 u u_x - g h1^2 (rho2/rho1 - 1) eta1_x
        p = PhysicalParams(rho1=0.9, rho2=2.0, h1=1.0, h2=50.0, g=1.0, L=1e9)
        r = ScalingRegime.upper_layer(p)
        eta1 = 1.0 + band_limited(grid, rng, amplitude=0.1)
        ubar = band_limited(grid, rng)
        s = DeepWaterState(eta1=eta1, sigma=-p.rho1 * ubar)
        et, st = rhs_deepwater(s, p, r, grid)
        ut = -st / p.rho1
        expect_et = -p.h1 * diff(eta1 * ubar, grid, 1)
        expect_ut = (-p.h1 * ubar * diff(ubar, grid, 1)
                     - p.g * p.h1**2 * (p.rho2 / p.rho1 - 1.0) * diff(eta1, grid, 1))
        assert rel_l2(et, expect_et) <= 1e-8
        assert rel_l2(ut, expect_ut) <= 1e-8

    def test_matches_poisson_applied_to_fd_gradient(self, grid, rng):
        p, r = self.make(eps=0.1)
        eta1 = 1.0 + band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.3)
        s = DeepWaterState(eta1=eta1, sigma=sigma)

        def total(e_, s_):
            return energy_deepwater(DeepWaterState(eta1=e_, sigma=s_),
                                    p, r, grid).total

        fd = np.stack([fd_gradient(total, (eta1, sigma), 0, grid),
                       fd_gradient(total, (eta1, sigma), 1, grid)])
        # eta1 = 1 - zeta flips the Darboux pair sign
        expected = -darboux_pair(grid).apply(None, fd)
        et, st = rhs_deepwater(s, p, r, grid)
        assert rel_l2(np.stack([et, st]), expected) <= 1e-6


class TestCCFourRHS:
    def make_params(self):
        return PhysicalParams(rho1=1.0, rho2=2.0, h1=1.5, h2=1.0, g=1.0, L=10.0)

    def test_rest_zero(self, grid):
        p = self.make_params()
        s = CCFourState(eta1=np.full(grid.n, p.h1), mu1=np.zeros(grid.n),
                        eta2=np.full(grid.n, p.h2), mu2=np.zeros(grid.n))
        out = rhs_cc_four(s, np.zeros(grid.n), p, 0.1, grid)
        assert all(np.max(np.abs(f)) == 0.0 for f in out)

    def test_zero_pressure_decouples_into_sgn_blocks(self, grid, rng):
        p = self.make_params()
        eps = 0.1
        s = CCFourState(eta1=p.h1 + band_limited(grid, rng, amplitude=0.1),
                        mu1=band_limited(grid, rng),
                        eta2=p.h2 + band_limited(grid, rng, amplitude=0.1),
                        mu2=band_limited(grid, rng))
        out = rhs_cc_four(s, np.zeros(grid.n), p, eps, grid)
        upper = rhs_sgn_canonical(
            SGNCanonicalState(eta=s.eta1, mu=s.mu1),
            SGNParams(rho=p.rho1, g=-p.g, depth=p.h1, epsilon=eps), grid)
        lower = rhs_sgn_canonical(
            SGNCanonicalState(eta=s.eta2, mu=s.mu2),
            SGNParams(rho=p.rho2, g=p.g, depth=p.h2, epsilon=eps), grid)
        assert rel_l2(out[0], upper[0]) <= 1e-12
        assert rel_l2(out[1], upper[1]) <= 1e-12
        assert rel_l2(out[2], lower[0]) <= 1e-12
        assert rel_l2(out[3], lower[1]) <= 1e-12

    def test_matches_quad_poisson_on_fd_gradient(self, grid, rng):
        from stratwave import energy_cc_four

        p = self.make_params()
        eps = 0.1
        pressure = band_limited(grid, rng, amplitude=0.2)
        fields = (p.h1 + band_limited(grid, rng, amplitude=0.1),
                  band_limited(grid, rng),
                  p.h2 + band_limited(grid, rng, amplitude=0.1),
                  band_limited(grid, rng))
        s = CCFourState(*fields)

        def total(e1, m1, e2, m2):
            return energy_cc_four(CCFourState(e1, m1, e2, m2), pressure,
                                  p, eps, grid).total

        fd = np.stack([fd_gradient(total, fields, i, grid) for i in range(4)])
        expected = darboux_quad(grid).apply(None, fd)
        out = np.stack(rhs_cc_four(s, diff(pressure, grid, 1), p, eps, grid))
        assert rel_l2(out, expected) <= 1e-6


class TestSGNClassicResidual:
    def test_steady_uniform_flow_zero(self, grid):
        p = SGNParams(rho=1.0, g=1.0, depth=1.0, epsilon=0.1)
        eta = np.full(grid.n, 1.3)
        ubar = np.full(grid.n, 0.5)
        zero = np.zeros(grid.n)
        r1, r2 = residual_sgn_classic(eta, ubar, zero, zero, p, grid)
        assert np.max(np.abs(r1)) <= 1e-12
        assert np.max(np.abs(r2)) <= 1e-12

    def test_fourth_order_along_canonical_flow(self, grid, rng):
        eta = 1.0 + band_limited(grid, rng, amplitude=0.15)
        mu = band_limited(grid, rng)
        residuals = []
        for eps in EPS_SWEEP:
            p = SGNParams(rho=1.0, g=1.0, depth=1.0, epsilon=eps)
            s = SGNCanonicalState(eta=eta, mu=mu)
            eta_t, mu_t = rhs_sgn_canonical(s, p, grid)
            ubar, ubar_t = sgn_ubar_rate(eta, mu, eta_t, mu_t, p, grid)
            r1, r2 = residual_sgn_classic(eta, ubar, eta_t, ubar_t, p, grid)
            residuals.append(np.linalg.norm(r1) + np.linalg.norm(r2))
        ratios = [residuals[0] / residuals[1], residuals[1] / residuals[2]]
        assert all(11.0 <= q <= 21.0 for q in ratios)
        assert fit_order(EPS_SWEEP, residuals) >= 3.7

    def test_scrambled_inputs_have_large_residual(self, grid, rng):
        eps = 0.1
        p = SGNParams(rho=1.0, g=1.0, depth=1.0, epsilon=eps)
        eta = 1.0 + band_limited(grid, rng, amplitude=0.15)
        mu = band_limited(grid, rng)
        s = SGNCanonicalState(eta=eta, mu=mu)
        eta_t, mu_t = rhs_sgn_canonical(s, p, grid)
        ubar, ubar_t = sgn_ubar_rate(eta, mu, eta_t, mu_t, p, grid)
        good = residual_sgn_classic(eta, ubar, eta_t, ubar_t, p, grid)
        bad = residual_sgn_classic(eta, ubar, eta_t, -ubar_t, p, grid)
        assert (np.linalg.norm(bad[1]) >
                100 * np.linalg.norm(good[1]))


class TestBoussinesqResidual:
    def make(self, eps, a=1.0):
        p = PhysicalParams(rho1=0.9, rho2=2.0, h1=1.0, h2=50.0, g=1.0, L=1.0 / eps)
        return p, ScalingRegime.upper_layer(p, a_exponent=a)

    def test_rest_zero(self, grid):
        p, r = self.make(0.1)
        ones = np.ones(grid.n)
        zero = np.zeros(grid.n)
        r1, r2, r2f = residual_boussinesq(ones, zero, zero, zero, p, r, grid,
                                          eta1_tt=zero)
        assert np.max(np.abs(r1)) == 0.0
        assert np.max(np.abs(r2)) == 0.0
        assert np.max(np.abs(r2f)) == 0.0

    def test_second_order_in_delta_along_flow(self, grid, rng):
        # smooth data keeps delta * k^2 small so the delta^2 term dominates
        eta1 = 1.0 + band_limited(grid, rng, kmax=3, amplitude=0.08)
        sigma = band_limited(grid, rng, kmax=3, amplitude=0.3)
        res_mixed, res_fav = [], []
        deltas = []
        for eps in EPS_SWEEP:
            p, r = self.make(eps)
            deltas.append(r.delta)
            s = DeepWaterState(eta1=eta1, sigma=sigma)
            eta1_t, sigma_t = rhs_deepwater(s, p, r, grid)
            ubar1, ubar1_t = deepwater_ubar_rate(eta1, sigma, eta1_t, sigma_t,
                                                 p, r, grid)
            eta1_tt = deepwater_eta1_tt(eta1, sigma, eta1_t, sigma_t, p, r, grid)
            r1, r2, r2f = residual_boussinesq(eta1, ubar1, eta1_t, ubar1_t,
                                              p, r, grid, eta1_tt=eta1_tt)
            assert np.max(np.abs(r1)) <= 1e-10
            res_mixed.append(np.linalg.norm(r2))
            res_fav.append(np.linalg.norm(r2f))
        for series in (res_mixed, res_fav):
            ratios = [series[0] / series[1], series[1] / series[2]]
            assert all(2.8 <= q <= 5.2 for q in ratios)

    def test_negative_control(self, grid, rng):
        eps = 0.1
        p, r = self.make(eps)
        eta1 = 1.0 + band_limited(grid, rng, kmax=3, amplitude=0.08)
        sigma = band_limited(grid, rng, kmax=3, amplitude=0.3)
        s = DeepWaterState(eta1=eta1, sigma=sigma)
        eta1_t, sigma_t = rhs_deepwater(s, p, r, grid)
        ubar1, ubar1_t = deepwater_ubar_rate(eta1, sigma, eta1_t, sigma_t, p, r, grid)
        good = residual_boussinesq(eta1, ubar1, eta1_t, ubar1_t, p, r, grid)
        bad = residual_boussinesq(eta1, ubar1, eta1_t, -ubar1_t, p, r, grid)
        assert np.linalg.norm(bad[1]) > 50 * np.linalg.norm(good[1])
