import numpy as np
import pytest

from pmcorr.core import dissipator, model, propagator
from pmcorr.core.dissipator import BathParams, RateSet
from pmcorr.core.model import DensityMatrix
from pmcorr.core.propagator import Propagator, memory_xi
from pmcorr.utils import errors

from conftest import random_rates, random_x_state

T_GRID = np.linspace(0.0, 40.0, 81)


def test_memory_xi_boundary_values():
    for lam in (0.0, -0.3, -1.0 + 2.0j):
        assert memory_xi(lam, 2.0, 0.0) == pytest.approx(1.0)
    for t in (0.0, 1.0, 25.0):
        assert memory_xi(0.0, 2.0, t) == pytest.approx(1.0)


def test_memory_xi_closed_form():
    lam, gamma0, t = -0.4 + 1.5j, 3.0, 0.7
    expected = (gamma0 * np.exp(lam * t) + lam * np.exp(-gamma0 * t)) / (lam + gamma0)
    assert memory_xi(lam, gamma0, t) == pytest.approx(expected, rel=1e-14)


def test_memory_xi_singular_limit_is_continuous():
    gamma0, t = 2.0, 1.3
    limit = np.exp(-gamma0 * t) * (1.0 + gamma0 * t)
    assert memory_xi(-gamma0, gamma0, t) == pytest.approx(limit, rel=1e-14)
    assert memory_xi(-gamma0 * (1.0 + 1e-6), gamma0, t) == pytest.approx(limit, rel=1e-5)


def test_memory_xi_is_vectorized():
    values = np.array([0.0, -0.5, -2.0, -1.0 + 1.0j])
    result = memory_xi(values, 2.0, 0.8)
    assert result.shape == (4,)
    assert result[1] == pytest.approx(memory_xi(-0.5, 2.0, 0.8))


def test_memory_xi_rejects_negative_time():
    with pytest.raises(ValueError):
        memory_xi(-0.5, 1.0, -0.1)


def test_long_memory_slows_relaxation():
    # small γ₀ keeps ξ(λ, t) closer to 1 at early times than e^{λt}
    lam, t = -1.0, 0.5
    assert memory_xi(lam, 0.5, t) > memory_xi(lam, 50.0, t) > np.exp(lam * t) - 1e-12


class TestPopulationPropagator:
    def setup_method(self):
        self.rng = np.random.default_rng(7)
        self.rate_sets = [random_rates(self.rng) for _ in range(20)]

    def test_identity_at_zero(self):
        for r in self.rate_sets:
            P = propagator.population_propagator(r, 0.7, 0.0)
            np.testing.assert_allclose(P, np.eye(4), atol=1e-12)

    def test_columns_sum_to_one(self):
        for r in self.rate_sets:
            for t in (0.1, 1.0, 10.0, 100.0):
                P = propagator.population_propagator(r, 0.7, t)
                np.testing.assert_allclose(P.sum(axis=0), 1.0, atol=1e-10)

    def test_long_time_columns_are_steady_state(self):
        for r in self.rate_sets:
            P = propagator.population_propagator(r, 2.0, 500.0)
            steady = np.real(np.diag(propagator.asymptotic_state(r).elements))
            for column in P.T:
                np.testing.assert_allclose(column, steady, atol=1e-10)

    def test_singular_jordan_basis_falls_back(self):
        r = RateSet(X1p=0.3, X1m=0.2, Y2p=0.1, Y2m=0.4, xi=2.0, eta=1.0)
        P = propagator.population_propagator(r, 1.5, 3.0)
        np.testing.assert_allclose(P.sum(axis=0), 1.0, atol=1e-10)
        P0 = propagator.population_propagator(r, 1.5, 0.0)
        np.testing.assert_allclose(P0, np.eye(4), atol=1e-12)

    def test_negative_time(self):
        with pytest.raises(ValueError):
            propagator.population_propagator(self.rate_sets[0], 1.0, -1.0)


def test_offdiag_multipliers_pairing_and_decay():
    r = RateSet(X1p=0.3, X1m=0.2, Y2p=0.1, Y2m=0.6, xi=2.5, eta=1.5)
    d0 = propagator.offdiag_multipliers(r, 4.0, 0.0)
    np.testing.assert_allclose(d0, 1.0)
    for t in (0.3, 2.0, 9.0):
        d = propagator.offdiag_multipliers(r, 4.0, t)
        np.testing.assert_allclose(d[0], np.conj(d[1]), rtol=1e-14)
        np.testing.assert_allclose(d[2], np.conj(d[3]), rtol=1e-14)
    assert np.all(np.abs(propagator.offdiag_multipliers(r, 4.0, 200.0)) < 1e-20)


def test_printed_coherence_solution_matches_memory_function(rng):
    for _ in range(10):
        base = random_rates(rng)
        r = RateSet(base.X1p, base.X1m, base.Y2p, base.Y2m, xi=2.3, eta=0.8)
        for gamma0 in (0.05, 1.0, 10.0):
            for t in (0.0, 0.4, 3.0, 15.0):
                np.testing.assert_allclose(
                    propagator.offdiag_multiplier_printed(r, gamma0, t),
                    propagator.offdiag_multipliers(r, gamma0, t),
                    atol=1e-12,
                )


def test_snapshot_bundles_both_sectors():
    r = RateSet(X1p=0.3, X1m=0.2, Y2p=0.1, Y2m=0.6, xi=2.5, eta=1.5)
    snap = propagator.snapshot(r, 1.0, 2.0)
    assert snap.t == 2.0
    np.testing.assert_array_equal(snap.P, propagator.population_propagator(r, 1.0, 2.0))
    np.testing.assert_array_equal(snap.d, propagator.offdiag_multipliers(r, 1.0, 2.0))


class TestPropagator:
    @pytest.fixture(autouse=True)
    def _propagator(self, fig1_system, fig1_baths):
        self.system = fig1_system
        self.baths = fig1_baths
        self.propagator = Propagator(fig1_system, fig1_baths)

    def test_initial_state_is_returned_at_zero(self, bell):
        assert self.propagator.state_at(bell, 0.0) is bell

    def test_trajectory_stays_a_density_matrix(self, bell, rng):
        for rho0 in (bell, random_x_state(rng)):
            for rho in self.propagator.trajectory(rho0, T_GRID):
                assert rho.basis == model.STANDARD
                assert rho.trace_error < 1e-10
                assert rho.hermiticity_error < 1e-12
                assert rho.min_eigenvalue > -1e-8

    def test_trajectory_keeps_x_shape(self, rng):
        for rho in self.propagator.trajectory(random_x_state(rng), T_GRID):
            assert model.x_shape_residual(rho) < 1e-12

    def test_module_level_evolve_agrees(self, bell):
        expected = self.propagator.state_at(bell, 3.5).elements
        actual = propagator.evolve(bell, self.system, self.baths, 3.5).elements
        np.testing.assert_allclose(actual, expected, atol=1e-14)
        states = propagator.trajectory(bell, self.system, self.baths, [0.0, 3.5])
        np.testing.assert_allclose(states[1].elements, expected, atol=1e-14)

    def test_relaxes_to_asymptotic_state(self, bell):
        late = self.propagator.state_at(bell, 5000.0)
        np.testing.assert_allclose(late.elements, self.propagator.asymptotic().elements, atol=1e-9)

    def test_rejects_non_x_state(self):
        plus = DensityMatrix.from_pure(np.array([1.0, 1.0, 0.0, 0.0]))
        with pytest.raises(errors.NotXShaped):
            self.propagator.state_at(plus, 1.0)

    def test_rejects_energy_basis_input(self, bell):
        energy = model.to_energy_basis(bell, self.propagator.spectrum)
        with pytest.raises(errors.BasisMismatch):
            self.propagator.state_at(energy, 1.0)

    def test_rejects_negative_time(self, bell):
        with pytest.raises(ValueError):
            self.propagator.state_at(bell, -0.5)

    def test_degenerate_parameters(self, fig1_baths):
        p = model.SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0, D=1.676305)
        with pytest.raises(errors.DegenerateSpectrum):
            Propagator(p, fig1_baths)


def test_asymptotic_state_is_normalized(rng):
    for _ in range(10):
        rho = propagator.asymptotic_state(random_rates(rng))
        assert rho.basis == model.ENERGY
        assert np.trace(rho.elements).real == pytest.approx(1.0, abs=1e-15)
        assert rho.min_eigenvalue > 0.0


def test_asymptotic_state_needs_dissipation():
    with pytest.raises(errors.ZeroRates):
        propagator.asymptotic_state(RateSet(X1p=0.0, X1m=0.0, Y2p=0.1, Y2m=0.2))


def test_gibbs_state_limits(fig1_system):
    ground = propagator.gibbs_state(fig1_system, np.inf)
    # below D_c the Σ⁻ level (-η) is lowest
    np.testing.assert_allclose(np.diag(ground.elements).real, [0.0, 0.0, 0.0, 1.0])
    hot = propagator.gibbs_state(fig1_system, 1e-12)
    np.testing.assert_allclose(np.diag(hot.elements).real, 0.25, atol=1e-10)
    with pytest.raises(errors.InvalidBathParams):
        propagator.gibbs_state(fig1_system, 0.0)


def test_uncoupled_bath_still_defines_dynamics(fig1_system, bell):
    baths = BathParams(T1=1.0, T2=0.5, gamma1=0.05, gamma2=0.0, gamma0=2.0)
    rho = Propagator(fig1_system, baths).state_at(bell, 10.0)
    assert rho.violations() == []


def test_markov_limit_is_a_semigroup(fig1_system):
    # γ₀/γ̄ = 10⁴
    baths = BathParams(T1=1.25, T2=0.75, gamma1=1.0, gamma2=1.0, gamma0=1e4)
    r = dissipator.rates(fig1_system, baths)
    for t1, t2 in [(0.5, 0.5), (0.5, 1.0), (1.0, 2.0), (2.0, 3.0)]:
        joint = propagator.population_propagator(r, baths.gamma0, t1 + t2)
        split = propagator.population_propagator(
            r, baths.gamma0, t1
        ) @ propagator.population_propagator(r, baths.gamma0, t2)
        assert np.max(np.abs(joint - split)) < 1e-3


def test_infinite_temperature_steady_state_is_maximally_mixed(fig1_system):
    baths = BathParams(T1=1e8, T2=1e8, gamma1=0.05, gamma2=0.05, gamma0=10.0)
    steady = Propagator(fig1_system, baths).asymptotic()
    np.testing.assert_allclose(steady.elements, np.eye(4) / 4.0, atol=1e-6)
