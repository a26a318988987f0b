"""Constraints, block algebra, and the restricted Hamiltonian."""
import numpy as np
import pytest

from stratwave import (CCFourState, Grid, PhysicalParams, ScalingRegime,
                       TwoLayerState, energy_cc_four, energy_two_layer,
                       fd_gradient)
from stratwave.dirac import (assemble_dirac_blocks, check_constraint_propagation,
                             constraints, dirac_block_identity, fit_energy_scale,
                             grad_restricted_hamiltonian, p34_matrix,
                             reconstruct_constrained, restricted_hamiltonian,
                             state_to_darboux, zero_mean_basis)
from stratwave.specops import diff_matrix

from conftest import band_limited, fit_order, rel_l2

EPS_SWEEP = [0.2, 0.1, 0.05]


def cc_params(h1=1.5, h2=1.0):
    return PhysicalParams(rho1=1.0, rho2=2.0, h1=h1, h2=h2, g=1.0, L=10.0)


class TestConstraints:
    def test_rest_state_satisfies_both(self, grid):
        p = cc_params()
        s = CCFourState(eta1=np.full(grid.n, p.h1), mu1=np.zeros(grid.n),
                        eta2=np.full(grid.n, p.h2), mu2=np.zeros(grid.n))
        res = constraints(s, p, 0.1, grid)
        assert np.max(np.abs(res.phi1)) == 0.0
        assert np.max(np.abs(res.phi2)) == 0.0

    def test_additive_shift_shows_in_phi1(self, grid):
        p = cc_params()
        c = 0.05
        s = CCFourState(eta1=np.full(grid.n, p.h1 + c), mu1=np.zeros(grid.n),
                        eta2=np.full(grid.n, p.h2), mu2=np.zeros(grid.n))
        res = constraints(s, p, 0.1, grid)
        assert np.allclose(res.phi1, c, rtol=1e-14)

    def test_reconstructed_phi2_fourth_order(self, grid, rng):
        p = cc_params()
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.3)
        residuals = []
        for eps in EPS_SWEEP:
            cc = reconstruct_constrained(zeta, sigma, p, eps, grid)
            res = constraints(cc, p, eps, grid)
            assert np.max(np.abs(res.phi1)) <= 1e-12
            residuals.append(res.max_abs()[1])
        ratios = [residuals[0] / residuals[1], residuals[1] / residuals[2]]
        assert all(11.0 <= q <= 21.0 for q in ratios)


class TestReconstruction:
    def test_rest_round_trip(self, grid):
        p = cc_params()
        cc = reconstruct_constrained(np.zeros(grid.n), np.zeros(grid.n),
                                     p, 0.1, grid)
        assert np.allclose(cc.eta1, p.h1)
        assert np.allclose(cc.eta2, p.h2)
        assert np.max(np.abs(cc.mu1)) == 0.0
        assert np.max(np.abs(cc.mu2)) == 0.0

    def test_momentum_difference_exact(self, grid, rng):
        p = cc_params()
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.3)
        cc = reconstruct_constrained(zeta, sigma, p, 0.15, grid)
        assert np.array_equal(cc.mu2, cc.mu1 + sigma)

    def test_forward_map_recovers_exactly(self, grid, rng):
        p = cc_params()
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.3)
        cc = reconstruct_constrained(zeta, sigma, p, 0.15, grid)
        z2, s2 = state_to_darboux(cc, p)
        assert np.allclose(z2, zeta, rtol=0, atol=1e-14)
        assert np.allclose(s2, sigma, rtol=0, atol=1e-14)

    def test_rejects_degenerate_layers(self, grid):
        p = cc_params()
        zeta = np.zeros(grid.n)
        zeta[5] = p.h1 + 0.1
        with pytest.raises(Exception, match="node 5"):
            reconstruct_constrained(zeta, np.zeros(grid.n), p, 0.1, grid)


class TestDiracBlocks:
    def test_p34_annihilates_constants(self, grid):
        p = cc_params()
        eta1 = np.full(grid.n, p.h1)
        eta2 = np.full(grid.n, p.h2)
        M = p34_matrix(eta1, eta2, p, 0.1, grid)
        assert np.max(np.abs(M @ np.ones(grid.n))) <= 1e-10

    def test_identity_on_random_geometries(self, rng):
        g = Grid(n=64, length=10.0)
        p = cc_params()
        for _ in range(10):
            _, defect = dirac_block_identity(p, 0.1, g, rng)
            assert defect <= 1e-10

    def test_reduced_equals_darboux_block(self, rng):
        g = Grid(n=64, length=10.0)
        p = cc_params()
        reduced, _ = dirac_block_identity(p, 0.1, g, rng)
        Q = zero_mean_basis(g.n)
        Dx = Q.T @ diff_matrix(g, 1) @ Q
        m = Dx.shape[0]
        A = np.block([[np.zeros((m, m)), -Dx], [-Dx, np.zeros((m, m))]])
        assert np.allclose(reduced, A, atol=1e-10 * np.linalg.norm(A, 2))

    def test_negative_control(self, rng):
        g = Grid(n=64, length=10.0)
        p = cc_params()
        _, defect = dirac_block_identity(p, 0.1, g, rng, corrupt_b=True)
        assert defect >= 1e-2

    def test_c_inverse_closed_form(self, rng):
        g = Grid(n=64, length=10.0)
        p = cc_params()
        zeta = band_limited(g, rng, amplitude=0.1)
        blocks = assemble_dirac_blocks(p.h1 - zeta, p.h2 + zeta, p, 0.1,
                                       g, rng)
        eye = np.eye(blocks.C.shape[0])
        err = np.linalg.norm(blocks.C @ blocks.C_inv - eye, 2)
        assert err <= 1e-10 * np.linalg.norm(blocks.C, 2)

    def test_structural_zero_of_correction(self, rng):
        g = Grid(n=64, length=10.0)
        p = cc_params()
        zeta = band_limited(g, rng, amplitude=0.1)
        blocks = assemble_dirac_blocks(p.h1 - zeta, p.h2 + zeta, p, 0.1,
                                       g, rng)
        m = blocks.P34.shape[0]
        assert np.max(np.abs(blocks.B[:m, :])) == 0.0    # zero first block row
        corr = blocks.B.T @ blocks.C_inv @ blocks.B
        assert np.max(np.abs(corr)) <= 1e-10


class TestRestrictedHamiltonian:
    def test_rest_zero(self, grid):
        p = cc_params()
        assert restricted_hamiltonian(np.zeros(grid.n), np.zeros(grid.n),
                                      p, 0.1, grid) == 0.0

    def test_constant_sigma_flat_interface(self, grid):
        p = cc_params()
        s0 = 0.6
        value = restricted_hamiltonian(np.zeros(grid.n), np.full(grid.n, s0),
                                       p, 0.2, grid)
        psi0 = p.rho1 * p.h2 + p.rho2 * p.h1
        expected = grid.length * p.h1 * p.h2 * s0**2 / (2 * psi0)
        assert value == pytest.approx(expected, rel=1e-13)

    def test_even_in_sigma(self, grid, rng):
        p = cc_params()
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.3)
        assert (restricted_hamiltonian(zeta, sigma, p, 0.15, grid)
                == restricted_hamiltonian(zeta, -sigma, p, 0.15, grid))

    def test_translation_invariance(self, grid, rng):
        p = cc_params()
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.3)
        e0 = restricted_hamiltonian(zeta, sigma, p, 0.15, grid)
        e1 = restricted_hamiltonian(np.roll(zeta, 41), np.roll(sigma, 41),
                                    p, 0.15, grid)
        assert abs(e1 - e0) <= 1e-13 * abs(e0)

    def test_gradient_matches_fd(self, grid, rng):
        p = cc_params()
        eps = 0.1
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.3)
        dz, ds = grad_restricted_hamiltonian(zeta, sigma, p, eps, grid)

        def total(z_, s_):
            return restricted_hamiltonian(z_, s_, p, eps, grid)

        assert rel_l2(dz, fd_gradient(total, (zeta, sigma), 0, grid)) <= 1e-6
        assert rel_l2(ds, fd_gradient(total, (zeta, sigma), 1, grid)) <= 1e-6

    def test_matches_two_layer_energy_with_fitted_scale(self, grid, rng):
        # at h2 = 1 the Sect. 2 and constrained geometries coincide and a
        # single scalar (c = 1) relates the functionals
        p = cc_params(h1=1.5, h2=1.0)
        r = ScalingRegime.lower_layer(p)
        pairs = []
        for _ in range(20):
            zeta = band_limited(grid, rng, amplitude=0.1)
            sigma = band_limited(grid, rng, amplitude=0.3)
            a = restricted_hamiltonian(zeta, sigma, p, r.epsilon, grid)
            b = energy_two_layer(TwoLayerState(zeta=zeta, sigma=sigma),
                                 p, r, grid).total
            pairs.append((a, b))
        c, residual = fit_energy_scale(pairs)
        assert residual <= 1e-8
        assert c == pytest.approx(1.0, rel=1e-10)

    def test_cc_four_energy_matches_restricted_fourth_order(self, grid, rng):
        p = cc_params()
        zeta = band_limited(grid, rng, amplitude=0.1)
        sigma = band_limited(grid, rng, amplitude=0.3)
        pressure = band_limited(grid, rng, amplitude=0.2)
        gaps = []
        for eps in EPS_SWEEP:
            cc = reconstruct_constrained(zeta, sigma, p, eps, grid)
            e4 = energy_cc_four(cc, pressure, p, eps, grid)
            restr = restricted_hamiltonian(zeta, sigma, p, eps, grid)
            gaps.append(abs(e4.total - e4.pressure_work - restr))
        assert fit_order(EPS_SWEEP, gaps) >= 3.7


class TestConstraintPropagationHelper:
    def test_rest_trajectory_zero(self, grid):
        p = cc_params()
        states = [(np.zeros(grid.n), np.zeros(grid.n))] * 3
        out = check_constraint_propagation(states, p, 0.1, grid)
        assert out["max_phi1"] == 0.0
        assert out["max_phi2"] == 0.0

    def test_near_degenerate_states_degrade_gracefully(self, grid, rng):
        # large-amplitude, nearly pinching layers: the residual is reported
        # (large but finite), no crash
        p = cc_params()
        zeta = band_limited(grid, rng, amplitude=0.9 * min(p.h1, p.h2))
        sigma = band_limited(grid, rng, amplitude=1.0)
        out = check_constraint_propagation([(zeta, sigma), (0.5 * zeta, sigma)],
                                           p, 0.2, grid)
        assert np.all(np.isfinite(out["phi2"]))
        assert out["max_phi1"] <= 1e-12
        assert out["max_phi2"] > 0.0
