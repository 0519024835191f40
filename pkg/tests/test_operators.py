"""Energy, gradient, and Laplacian on the star grid."""

import math

import numpy as np
import pytest

from graphnls import (
    GraphSpec,
    GraphState,
    apply_laplacian,
    best_omega,
    el_residual,
    energy,
    energy_gradient,
    energy_sesqui_closed,
    mass,
    rescale_mass,
    random_vertex_continuous_state,
    sesquisoliton,
    SesquiParams,
    stationary_state,
    weighted_inner,
    weighted_norm,
)

M = 6.0


def gaussian_state(spec, width=2.0):
    # u'(0) = 0 on every edge, so the Kirchhoff condition holds exactly
    x = spec.coordinates()
    row = np.exp(-((x / width) ** 2)).astype(complex)
    return GraphState(spec, np.tile(row, (spec.edge_count, 1)))


class TestWeightedInner:
    def test_norm_squared_is_mass(self, coarse_spec, rng):
        st = random_vertex_continuous_state(coarse_spec, rng, target_mass=M)
        assert weighted_norm(st) ** 2 == pytest.approx(mass(st), rel=1e-12)

    def test_conjugate_symmetry(self, coarse_spec, rng):
        a = random_vertex_continuous_state(coarse_spec, rng, target_mass=2.0)
        b = random_vertex_continuous_state(coarse_spec, rng, target_mass=3.0)
        assert weighted_inner(a, b) == pytest.approx(
            np.conj(weighted_inner(b, a)), rel=1e-12)


class TestLaplacian:
    def test_matches_second_derivative_inside_edges(self):
        spec = GraphSpec(3, 20.0, 4096)
        st = gaussian_state(spec)
        x = spec.coordinates()
        lap = apply_laplacian(st)
        # exact: u'' = (4x^2/w^4 - 2/w^2) exp(-x^2/w^2) with w = 2
        exact = (x ** 2 - 2.0) / 4.0 * np.exp(-((x / 2.0) ** 2))
        mid = slice(50, 2000)
        err = np.max(np.abs(lap.values[0][mid] - exact[mid]))
        assert err < 1e-5

    def test_symmetric_in_weighted_inner(self, coarse_spec, rng):
        worst = 0.0
        for _ in range(10):
            a = random_vertex_continuous_state(coarse_spec, rng, target_mass=1.0)
            b = random_vertex_continuous_state(coarse_spec, rng, target_mass=1.0)
            s1 = weighted_inner(apply_laplacian(a), b)
            s2 = weighted_inner(a, apply_laplacian(b))
            worst = max(worst, abs(s1 - s2) / max(abs(s1), 1.0))
        assert worst < 1e-12

    def test_negative_semidefinite(self, coarse_spec, rng):
        for _ in range(10):
            a = random_vertex_continuous_state(coarse_spec, rng, target_mass=1.0)
            q = weighted_inner(apply_laplacian(a), a).real
            assert q <= 1e-12


class TestEnergy:
    def test_report_is_consistent(self, coarse_spec, rng):
        st = random_vertex_continuous_state(coarse_spec, rng, target_mass=M)
        rep = energy(st)
        assert rep.total == pytest.approx(rep.kinetic - rep.quartic, rel=1e-14)
        assert rep.mass == pytest.approx(mass(st), rel=1e-14)

    def test_sesquisoliton_energy(self):
        spec = GraphSpec(3, 30.0, 2048)
        st = sesquisoliton(SesquiParams.solve(1.0, 5.0), spec)
        assert energy(st).total == pytest.approx(
            energy_sesqui_closed(1.0, M), rel=1e-4)


class TestGradient:
    def test_finite_difference_consistency(self, rng):
        # directional derivative of E against Re<grad E, D>
        spec = GraphSpec(3, 20.0, 256)
        worst = 0.0
        for _ in range(10):
            st = random_vertex_continuous_state(spec, rng, target_mass=M)
            d = random_vertex_continuous_state(spec, rng, target_mass=1.0)
            g = energy_gradient(st)
            h = 1e-6
            ep = energy(GraphState(spec, st.values + h * d.values)).total
            em = energy(GraphState(spec, st.values - h * d.values)).total
            fd = (ep - em) / (2.0 * h)
            an = weighted_inner(g, d).real
            worst = max(worst, abs(fd - an) / max(abs(an), 1.0))
        assert worst < 1e-6

    def test_gradient_small_at_stationary_state(self):
        spec = GraphSpec(3, 30.0, 2048)
        st, info = stationary_state(M, spec)
        # grad E = -lap - |psi|^2 psi; at the profile it equals -omega*psi
        g = energy_gradient(st)
        resid = GraphState(spec, g.values + info.omega * st.values)
        assert weighted_norm(resid) < 1e-3


class TestEulerLagrange:
    def test_residual_small_at_stationary_state(self):
        spec = GraphSpec(3, 30.0, 2048)
        st, info = stationary_state(M, spec)
        assert el_residual(st, info.omega) < 1e-3

    def test_residual_quarters_under_grid_halving(self):
        st1, info = stationary_state(M, GraphSpec(3, 30.0, 1024))
        st2, _ = stationary_state(M, GraphSpec(3, 30.0, 2047))
        r1 = el_residual(st1, info.omega)
        r2 = el_residual(st2, info.omega)
        assert 3.5 < r1 / r2 < 4.5

    def test_best_omega_at_stationary_state(self):
        spec = GraphSpec(3, 30.0, 2048)
        st, info = stationary_state(M, spec)
        assert best_omega(st) == pytest.approx(info.omega, rel=1e-3)

    def test_residual_large_off_solution(self, coarse_spec, rng):
        st = random_vertex_continuous_state(coarse_spec, rng, target_mass=M)
        assert el_residual(st, best_omega(st)) > 1e-2


class TestGaugeInvariance:
    def test_energy_unchanged_by_global_phase(self, coarse_spec, rng):
        st = random_vertex_continuous_state(coarse_spec, rng, target_mass=M)
        rot = GraphState(coarse_spec, st.values * np.exp(1j * 0.7))
        assert energy(rot).total == pytest.approx(energy(st).total, rel=1e-13)

    def test_gradient_rotates_with_the_state(self, coarse_spec, rng):
        st = random_vertex_continuous_state(coarse_spec, rng, target_mass=M)
        rot = GraphState(coarse_spec, st.values * np.exp(1j * 0.7))
        g1 = energy_gradient(rot).values
        g2 = energy_gradient(st).values * np.exp(1j * 0.7)
        assert np.max(np.abs(g1 - g2)) < 1e-12
