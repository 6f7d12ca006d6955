import math

import numpy as np
import pytest

from pmcorr.core import dissipator, model, oracle
from pmcorr.core.dissipator import BathParams, RateSet
from pmcorr.core.model import SystemParams
from pmcorr.utils import errors

from conftest import random_rates, random_system


def test_bath_params_derived_quantities():
    baths = BathParams.from_mean(1.0, 0.5, gamma1=0.04, gamma2=0.06, gamma0=10.0)
    assert (baths.T1, baths.T2) == (1.25, 0.75)
    assert baths.t_mean == pytest.approx(1.0)
    assert baths.delta_t == pytest.approx(0.5)
    assert baths.gamma_bar == pytest.approx(0.05)
    assert baths.beta(2) == pytest.approx(1.0 / 0.75)
    assert baths.gamma(1) == 0.04


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(T1=0.0, T2=1.0, gamma1=0.05, gamma2=0.05, gamma0=1.0),
        dict(T1=1.0, T2=1.0, gamma1=-0.05, gamma2=0.05, gamma0=1.0),
        dict(T1=1.0, T2=1.0, gamma1=0.05, gamma2=0.05, gamma0=0.0),
        dict(T1=1.0, T2=1.0, gamma1=0.0, gamma2=0.0, gamma0=1.0),
    ],
)
def test_invalid_baths(kwargs):
    with pytest.raises(errors.InvalidBathParams):
        BathParams(**kwargs).validate()


def test_uncoupled_baths_allowed_on_request():
    baths = BathParams(T1=1.0, T2=1.0, gamma1=0.0, gamma2=0.0, gamma0=1.0)
    assert baths.validate(require_coupling=False) is baths


def test_bose_occupation():
    assert dissipator.bose_occupation(1.0, 1.0) == pytest.approx(1.0 / (math.e - 1.0))
    assert dissipator.bose_occupation(1000.0, 1.0) == 0.0
    with pytest.raises(errors.NonPositiveFrequency):
        dissipator.bose_occupation(0.0, 1.0)


def test_spectral_density_detailed_balance():
    baths = BathParams(T1=0.8, T2=1.3, gamma1=0.07, gamma2=0.03, gamma0=1.0)
    for j in dissipator.BATHS:
        up = dissipator.spectral_density(baths, j, 0.9)
        down = dissipator.spectral_density(baths, j, -0.9)
        assert down / up == pytest.approx(math.exp(0.9 * baths.beta(j)))
        assert down - up == pytest.approx(baths.gamma(j))
    with pytest.raises(errors.ZeroFrequency):
        dissipator.spectral_density(baths, 1, 0.0)


def test_transition_coeffs_are_normalized(rng):
    for _ in range(20):
        coeffs = dissipator.transition_coeffs(random_system(rng))
        assert np.all(coeffs.c2 >= 0.0)
        np.testing.assert_allclose(coeffs.c2[:, 0] + coeffs.c2[:, 1], 1.0)
        np.testing.assert_array_equal(coeffs.c2[:, 0], coeffs.c2[:, 3])
        np.testing.assert_array_equal(coeffs.c2[:, 1], coeffs.c2[:, 2])


def test_transition_coeffs_match_eigenvector_overlaps(fig1_system):
    vectors = model.spectrum(fig1_system).eigenvectors
    coeffs = dissipator.transition_coeffs(fig1_system)
    for j, local in zip(dissipator.BATHS, oracle.LOCAL_SIGMA_X):
        overlap = np.abs(vectors.conj().T @ local @ vectors) ** 2
        # ⟨Ψ⁺|σˣ|Σ⁺⟩ carries the ω₁ coefficient, ⟨Ψ⁺|σˣ|Σ⁻⟩ the ω₂ one
        assert overlap[0, 2] == pytest.approx(coeffs.of(j, 1))
        assert overlap[0, 3] == pytest.approx(coeffs.of(j, 2))


def test_rates_detailed_balance_at_equal_temperatures(rng):
    for _ in range(10):
        p = random_system(rng)
        baths = BathParams(T1=0.7, T2=0.7, gamma1=0.05, gamma2=0.08, gamma0=5.0)
        r = dissipator.rates(p, baths)
        assert r.X1m / r.X1p == pytest.approx(math.exp((p.xi - p.eta) / 0.7))
        assert r.Y2m / r.Y2p == pytest.approx(math.exp((p.xi + p.eta) / 0.7))
        assert (r.xi, r.eta) == (pytest.approx(p.xi), pytest.approx(p.eta))


def test_rates_reject_degenerate_spectrum():
    p = SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0, D=1.676305)
    baths = BathParams(T1=1.0, T2=1.0, gamma1=0.05, gamma2=0.05, gamma0=1.0)
    with pytest.raises(errors.DegenerateSpectrum):
        dissipator.rates(p, baths)


def test_rates_honour_a_tighter_degeneracy_tolerance():
    D = model.critical_D(J=1.0, chi=0.9, B=2.0, b=1.0) + 1e-6
    p = SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0, D=D)
    baths = BathParams(T1=1.0, T2=1.0, gamma1=0.05, gamma2=0.05, gamma0=1.0)
    with pytest.raises(errors.DegenerateSpectrum):
        dissipator.rates(p, baths)
    r = dissipator.rates(p, baths, tol=1e-9)
    assert all(math.isfinite(value) for value in (r.X1p, r.X1m, r.Y2p, r.Y2m))


def test_lindblad_diag_matrix_conserves_probability(rng):
    for _ in range(10):
        generator = dissipator.lindblad_diag_matrix(random_rates(rng))
        np.testing.assert_allclose(generator.sum(axis=0), 0.0, atol=1e-14)
        off_diagonal = generator[~np.eye(4, dtype=bool)]
        assert np.all(off_diagonal >= 0.0)


def test_jordan_decomposition_diagonalizes_generator(rng):
    for _ in range(20):
        r = random_rates(rng)
        s_matrix, jd = dissipator.jordan_decomposition(r)
        generator = dissipator.lindblad_diag_matrix(r)
        np.testing.assert_allclose(generator @ s_matrix, s_matrix * jd, atol=1e-12)
        np.testing.assert_allclose(jd, [0.0, -r.X1, -r.Y2, -(r.X1 + r.Y2)])


def test_jordan_decomposition_steady_column_is_product_state():
    r = RateSet(X1p=0.2, X1m=0.6, Y2p=0.1, Y2m=0.9)
    s_matrix, _ = dissipator.jordan_decomposition(r)
    steady = s_matrix[:, 0] / s_matrix[:, 0].sum()
    expected = np.array([0.2 * 0.1, 0.6 * 0.9, 0.6 * 0.1, 0.2 * 0.9]) / (0.8 * 1.0)
    np.testing.assert_allclose(steady, expected)


@pytest.mark.parametrize(
    "r",
    [
        RateSet(X1p=0.3, X1m=0.2, Y2p=0.1, Y2m=0.4),
        RateSet(X1p=0.0, X1m=0.2, Y2p=0.1, Y2m=0.4),
        RateSet(X1p=0.3, X1m=0.2, Y2p=0.1, Y2m=0.0),
        RateSet(X1p=0.0, X1m=0.0, Y2p=0.1, Y2m=0.4),
    ],
)
def test_jordan_decomposition_singular_cases(r):
    with pytest.raises(errors.RateDegeneracy):
        dissipator.jordan_decomposition(r)


def test_nondiag_eigenvalues_come_in_conjugate_pairs():
    r = RateSet(X1p=0.3, X1m=0.2, Y2p=0.1, Y2m=0.6, xi=2.5, eta=1.5)
    values = dissipator.nondiag_eigenvalues(r)
    assert values[0] == np.conj(values[1])
    assert values[2] == np.conj(values[3])
    np.testing.assert_allclose(values.real, -0.6)
    np.testing.assert_allclose(values.imag, [-5.0, 5.0, -3.0, 3.0])
