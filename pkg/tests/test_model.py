import numpy as np
import pytest

from pmcorr.core import model
from pmcorr.core.model import DensityMatrix, SystemParams
from pmcorr.utils import errors

from conftest import random_system, random_x_state


def test_critical_d_matches_reported_value():
    assert model.critical_D(J=1.0, chi=0.9, B=2.0, b=1.0) == pytest.approx(1.676, abs=5e-3)


def test_critical_d_makes_the_spectrum_degenerate():
    d_c = model.critical_D(J=1.0, chi=0.9, B=2.0, b=1.0)
    p = SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0, D=d_c)
    assert p.xi == pytest.approx(p.eta, rel=1e-12)
    with pytest.raises(errors.DegenerateSpectrum):
        model.validate_params(p)


@pytest.mark.parametrize(
    "J, chi, B, b",
    [
        (0.0, 0.9, 2.0, 1.0),
        # ξ already exceeds η at D = 0
        (1.0, 0.0, 0.5, 1.0),
    ],
)
def test_critical_d_absent(J, chi, B, b):
    with pytest.raises(errors.NoCriticalPoint):
        model.critical_D(J=J, chi=chi, B=B, b=b)


def test_anisotropy_outside_unit_interval():
    with pytest.raises(errors.InvalidAnisotropy) as err:
        model.validate_params(SystemParams(J=1.0, chi=1.5, B=2.0, b=1.0, D=1.0))
    assert err.value.exit_code == errors.EXIT_PHYSICS


def test_zero_sigma_splitting_is_degenerate():
    with pytest.raises(errors.DegenerateSpectrum):
        model.validate_params(SystemParams(J=1.0, chi=0.0, B=0.0, b=1.0, D=1.0))


def test_degeneracy_tolerance_is_configurable():
    p = SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0, D=1.67)
    model.validate_params(p)
    with pytest.raises(errors.DegenerateSpectrum):
        model.validate_params(p, tol=0.1)


def test_hamiltonian_is_hermitian_and_x_shaped(fig1_system):
    hamiltonian = model.build_hamiltonian(fig1_system)
    np.testing.assert_allclose(hamiltonian, hamiltonian.conj().T)
    assert np.abs(hamiltonian[~model.X_MASK]).max() == 0.0
    assert np.trace(hamiltonian) == pytest.approx(0.0)


def test_spectrum_diagonalizes_hamiltonian(rng):
    for _ in range(10_000):
        p = random_system(rng)
        s = model.spectrum(p)
        unitary = s.eigenvectors
        np.testing.assert_allclose(unitary.conj().T @ unitary, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(
            model.build_hamiltonian(p) @ unitary, unitary * s.energies, atol=1e-10
        )
        np.testing.assert_allclose(s.energies, [p.xi, -p.xi, p.eta, -p.eta])
        # phase-fixed components stay real and nonnegative for signed parameters
        fixed = unitary[[2, 2, 3, 3], [0, 1, 2, 3]]
        assert np.all(np.abs(fixed.imag) < 1e-12)
        assert np.all(fixed.real > -1e-12)


def test_spectrum_branches_and_phases(fig1_system):
    s = model.spectrum(fig1_system)
    psi, sigma = s.eigenvectors[:, :2], s.eigenvectors[:, 2:]
    assert np.abs(psi[list(model.SIGMA_SUPPORT), :]).max() == 0.0
    assert np.abs(sigma[list(model.PSI_SUPPORT), :]).max() == 0.0

    # |10> component of Ψ± and |11> component of Σ± are real and nonnegative
    for component in list(psi[2, :]) + list(sigma[3, :]):
        assert abs(component.imag) < 1e-12
        assert component.real >= 0.0


def test_density_matrix_rejects_wrong_shape_and_basis():
    with pytest.raises(errors.NotDensityMatrix):
        DensityMatrix(np.eye(3) / 3.0)
    with pytest.raises(errors.BasisMismatch):
        DensityMatrix(np.eye(4) / 4.0, basis="computational")


def test_density_matrix_is_immutable(bell):
    with pytest.raises(ValueError):
        bell.elements[0, 0] = 1.0


def test_pure_state_properties(bell):
    assert bell.purity == pytest.approx(1.0)
    assert bell.trace_error == pytest.approx(0.0, abs=1e-15)
    assert bell.min_eigenvalue == pytest.approx(0.0, abs=1e-12)
    assert bell.violations() == []
    assert bell.check() is bell


def test_violations_are_labelled():
    broken = DensityMatrix(np.diag([0.7, 0.5, -0.1, 0.0]))
    assert broken.violations() == ["trace", "positivity"]
    with pytest.raises(errors.NotDensityMatrix):
        broken.check()

    skewed = np.eye(4, dtype=complex) / 4.0
    skewed[0, 1] = 0.1
    assert "hermiticity" in DensityMatrix(skewed).violations()


def test_energy_basis_round_trip(fig1_system, bell):
    s = model.spectrum(fig1_system)
    energy = model.to_energy_basis(bell, s)
    assert energy.basis == model.ENERGY
    back = model.from_energy_basis(energy, s)
    np.testing.assert_allclose(back.elements, bell.elements, atol=1e-12)


def test_x_state_is_block_diagonal_in_energy_basis(fig1_system, rng):
    s = model.spectrum(fig1_system)
    energy = model.to_energy_basis(random_x_state(rng), s).elements
    # Ψ block (0, 1) and Σ block (2, 3) never mix
    assert np.abs(energy[:2, 2:]).max() < 1e-12
    assert np.abs(energy[2:, :2]).max() < 1e-12


def test_basis_tags_are_enforced(fig1_system, bell):
    s = model.spectrum(fig1_system)
    with pytest.raises(errors.BasisMismatch):
        model.from_energy_basis(bell, s)
    energy = model.to_energy_basis(bell, s)
    with pytest.raises(errors.BasisMismatch):
        model.to_energy_basis(energy, s)
    with pytest.raises(errors.BasisMismatch):
        model.x_shape_residual(energy)


def test_x_shape_residual():
    assert model.x_shape_residual(DensityMatrix(np.eye(4) / 4.0)) == 0.0
    plus = DensityMatrix.from_pure(np.array([1.0, 1.0, 0.0, 0.0]))
    assert model.x_shape_residual(plus) == pytest.approx(0.5)
