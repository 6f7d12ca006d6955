"""Closed-form solution of the post-Markovian master equation for X-shaped states.

With the exponential kernel k(t) = γ₀ e^{-γ₀ t}, each eigenmode λ of the Lindbladian
evolves with the memory function ξ(λ, t) instead of e^{λt}. Energy-basis
populations evolve with P(t) = S diag(ξ(J^(d), t)) S⁻¹, the two coherences ρ₁₂
and ρ₃₄ with ξ(λ^(n), t), and every other coherence stays zero.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from logzero import logger

from ..utils import errors
from . import appendix
from .dissipator import (
    BathParams,
    RateSet,
    jordan_decomposition,
    lindblad_diag_matrix,
    nondiag_eigenvalues,
    rates,
)
from .model import (
    ENERGY,
    STANDARD,
    DensityMatrix,
    Spectrum,
    SystemParams,
    from_energy_basis,
    spectrum,
    to_energy_basis,
    x_shape_residual,
)

X_SHAPE_TOL = 1e-10
SINGULAR_RELATIVE_TOL = 1e-9

# Energy-basis coherences driven by (d₁, d₂, d₃, d₄).
COHERENCE_SLOTS = ((0, 1), (1, 0), (2, 3), (3, 2))


@dataclass(frozen=True)
class PropagatorSnapshot:
    """Population propagator P and coherence multipliers d at one time t."""

    t: float
    P: np.ndarray
    d: np.ndarray


def _check_time(t: float) -> None:
    if not t >= 0.0:
        errors.raise_error(
            f"Propagation time must be nonnegative, got t={t}.",
            suggest_report=False,
            error=ValueError,
        )


def memory_xi(
    lam: Union[complex, np.ndarray], gamma0: float, t: float
) -> Union[complex, np.ndarray]:
    """Memory function ξ(λ, t) = (γ₀ e^{λt} + λ e^{-γ₀t}) / (λ + γ₀).

    At λ = -γ₀ (to a relative tolerance of 1e-9) the limit e^{-γ₀t}(1 + γ₀t) is used.
    Accepts a scalar or an array of eigenvalues.
    """

    _check_time(t)
    values = np.asarray(lam, dtype=complex)
    denominator = values + gamma0
    singular = np.abs(denominator) < SINGULAR_RELATIVE_TOL * gamma0
    safe = np.where(singular, 1.0, denominator)

    regular = (gamma0 * np.exp(values * t) + values * np.exp(-gamma0 * t)) / safe
    limit = np.exp(-gamma0 * t) * (1.0 + gamma0 * t)
    result = np.where(singular, limit, regular)

    if result.ndim == 0:
        return complex(result)
    return result


def _population_modes(r: RateSet) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(S, J^(d), S⁻¹), falling back to a numeric eigendecomposition when S is singular."""

    try:
        s_matrix, jd = jordan_decomposition(r)
        return s_matrix, jd.astype(complex), np.linalg.inv(s_matrix)
    except errors.RateDegeneracy as err:
        logger.debug("Using numeric eigendecomposition of L^diag: %s", err)

    values, vectors = np.linalg.eig(lindblad_diag_matrix(r))
    return vectors, values, np.linalg.inv(vectors)


def _propagate_modes(
    modes: Tuple[np.ndarray, np.ndarray, np.ndarray], gamma0: float, t: float
) -> np.ndarray:
    s_matrix, jd, s_inverse = modes
    weights = memory_xi(jd, gamma0, t)
    return np.real((s_matrix * weights) @ s_inverse)


def population_propagator(r: RateSet, gamma0: float, t: float) -> np.ndarray:
    """P(t) = S diag(ξ(0,t), ξ(-X₁,t), ξ(-Y₂,t), ξ(-X₁-Y₂,t)) S⁻¹.

    Args:
        r (RateSet): rates of the diagonal sector.
        gamma0 (float): memory rate of the kernel.
        t (float): time, t >= 0.

    Returns:
        np.ndarray: real 4x4 propagator acting on (p_Ψ⁺, p_Ψ⁻, p_Σ⁺, p_Σ⁻).
    """

    _check_time(t)
    return _propagate_modes(_population_modes(r), gamma0, t)


def appendix_propagator(r: RateSet, gamma0: float, t: float) -> np.ndarray:
    """P(t) evaluated element by element from the printed closed-form table."""

    _check_time(t)
    return appendix.evaluate_table(r, gamma0, t)


def offdiag_multipliers(r: RateSet, gamma0: float, t: float) -> np.ndarray:
    """d_k(t) = ξ(λ_k^(n), t) for (ρ₁₂, ρ₂₁, ρ₃₄, ρ₄₃) in the energy basis."""

    return np.asarray(memory_xi(nondiag_eigenvalues(r), gamma0, t))


def offdiag_multiplier_printed(r: RateSet, gamma0: float, t: float) -> np.ndarray:
    """The printed closed form of the coherence solution.

    ρ₁₂(t)/ρ₁₂(0) = e^{-γ₀t}(S - 2(e^{-t(S - 2(γ₀ - 2iω))/2} γ₀ - 2iω)) / (S - 2(γ₀ - 2iω))
    with S = X₁ + Y₂ and ω = ξ; ρ₃₄ uses ω = η and ρ₂₁, ρ₄₃ are the conjugates.
    """

    _check_time(t)
    total = r.X1 + r.Y2

    def printed(omega: float) -> complex:
        shift = total - 2.0 * (gamma0 - 2j * omega)
        inner = np.exp(-0.5 * t * shift) * gamma0 - 2j * omega
        return complex(np.exp(-t * gamma0) * (total - 2.0 * inner) / shift)

    first, second = printed(r.xi), printed(r.eta)
    return np.array([first, first.conjugate(), second, second.conjugate()])


def snapshot(r: RateSet, gamma0: float, t: float) -> PropagatorSnapshot:
    return PropagatorSnapshot(
        t=t,
        P=population_propagator(r, gamma0, t),
        d=offdiag_multipliers(r, gamma0, t),
    )


class Propagator:
    """Evolves X-shaped states for one set of system and bath parameters.

    The spectrum, rates and population eigenmodes are computed once, so a whole
    time grid costs one 4x4 product per point.
    """

    def __init__(self, p: SystemParams, baths: BathParams, tol: Optional[float] = None):
        baths.validate(require_coupling=False)
        self.params = p
        self.baths = baths
        self.spectrum: Spectrum = spectrum(p, tol)
        self.rates: RateSet = rates(p, baths, tol)
        self._modes = _population_modes(self.rates)
        self._nondiag = nondiag_eigenvalues(self.rates)

    def snapshot(self, t: float) -> PropagatorSnapshot:
        return PropagatorSnapshot(
            t=t,
            P=_propagate_modes(self._modes, self.baths.gamma0, t),
            d=np.asarray(memory_xi(self._nondiag, self.baths.gamma0, t)),
        )

    def prepare(self, rho0: DensityMatrix) -> DensityMatrix:
        """Checks the X shape of a standard-basis state and moves it to the energy basis."""

        if rho0.basis != STANDARD:
            errors.raise_error(
                f"Initial state must be given in the standard basis, got '{rho0.basis}'.",
                suggest_report=False,
                error=errors.BasisMismatch,
            )
        residual = x_shape_residual(rho0)
        if residual > X_SHAPE_TOL:
            errors.raise_error(
                f"Initial state is not X-shaped (largest non-X element {residual:.3e}).",
                suggest_report=False,
                error=errors.NotXShaped,
            )
        return to_energy_basis(rho0, self.spectrum)

    def state_at(
        self, rho0: DensityMatrix, t: float, prepared: Optional[DensityMatrix] = None
    ) -> DensityMatrix:
        """ρ(t) in the standard basis for an X-shaped ρ(0)."""

        _check_time(t)
        energy = prepared if prepared is not None else self.prepare(rho0)
        if t == 0.0:
            return rho0

        snap = self.snapshot(t)
        initial = energy.elements
        evolved = np.zeros((4, 4), dtype=complex)
        evolved[np.diag_indices(4)] = snap.P @ np.real(np.diag(initial))
        for multiplier, (row, col) in zip(snap.d, COHERENCE_SLOTS):
            evolved[row, col] = multiplier * initial[row, col]

        standard = from_energy_basis(DensityMatrix(evolved, ENERGY), self.spectrum).elements
        return DensityMatrix(0.5 * (standard + standard.conj().T), STANDARD)

    def trajectory(self, rho0: DensityMatrix, t_grid: Sequence[float]) -> List[DensityMatrix]:
        prepared = self.prepare(rho0)
        return [self.state_at(rho0, float(t), prepared) for t in t_grid]

    def asymptotic(self) -> DensityMatrix:
        """The t → ∞ state in the standard basis."""
        return from_energy_basis(asymptotic_state(self.rates), self.spectrum)


def evolve(
    rho0: DensityMatrix, p: SystemParams, baths: BathParams, t: float
) -> DensityMatrix:
    """Evolves an X-shaped standard-basis state to time t.

    Raises:
        NotXShaped: if rho0 has weight outside the X pattern above 1e-10.
        DegenerateSpectrum: if ξ = η, ξ = 0 or η = 0.
    """

    return Propagator(p, baths).state_at(rho0, t)


def trajectory(
    rho0: DensityMatrix, p: SystemParams, baths: BathParams, t_grid: Sequence[float]
) -> List[DensityMatrix]:
    return Propagator(p, baths).trajectory(rho0, t_grid)


def asymptotic_state(r: RateSet) -> DensityMatrix:
    """diag(X₁⁺Y₂⁺, X₁⁻Y₂⁻, X₁⁻Y₂⁺, X₁⁺Y₂⁻) / (X₁Y₂) in the energy basis.

    Raises:
        ZeroRates: if X₁ or Y₂ vanishes.
    """

    if not (r.X1 > 0.0 and r.Y2 > 0.0):
        errors.raise_error(
            f"No unique steady state without dissipation (X1={r.X1:.6g}, Y2={r.Y2:.6g}).",
            suggest_report=False,
            error=errors.ZeroRates,
        )
    # product of the two normalized two-level steady states, so the trace is exactly 1
    x_high, x_low = r.X1p / r.X1, r.X1m / r.X1
    y_high, y_low = r.Y2p / r.Y2, r.Y2m / r.Y2
    populations = np.array([x_high * y_high, x_low * y_low, x_low * y_high, x_high * y_low])
    return DensityMatrix(np.diag(populations), ENERGY)


def gibbs_state(p: SystemParams, beta: float) -> DensityMatrix:
    """Canonical state e^{-βH}/Z in the energy basis, β = ∞ giving the ground state."""

    if not beta > 0.0:
        errors.raise_error(
            f"Inverse temperature must be positive, got beta={beta}.",
            suggest_report=False,
            error=errors.InvalidBathParams,
        )
    xi, eta = p.xi, p.eta
    energies = np.array([xi, -xi, eta, -eta])
    if np.isinf(beta):
        weights = (energies == energies.min()).astype(float)
    else:
        weights = np.exp(-beta * (energies - energies.min()))
    return DensityMatrix(np.diag(weights / weights.sum()), ENERGY)
