"""Thermal baths, transition coefficients, rates and the diagonal-sector Lindbladian.

All frequencies are signed. A transition that raises the system energy by ω > 0
absorbs a bath quantum with weight γ n(ω); lowering by ω emits with weight
γ (n(ω) + 1). Both cases are covered by one spectral density J(ω) with the
detailed-balance property J(-ω) = e^{βω} J(ω).
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..utils import errors
from .model import SystemParams, validate_params

BATHS = (1, 2)


@dataclass(frozen=True)
class BathParams:
    """Two independent bosonic baths and the memory rate of the kernel.

    Attributes:
        T1 (float): temperature of the bath coupled to qubit 1.
        T2 (float): temperature of the bath coupled to qubit 2.
        gamma1 (float): coupling strength of bath 1.
        gamma2 (float): coupling strength of bath 2.
        gamma0 (float): inverse memory time of the kernel k(t) = γ₀ e^{-γ₀ t}.
    """

    T1: float
    T2: float
    gamma1: float
    gamma2: float
    gamma0: float

    @property
    def t_mean(self) -> float:
        return 0.5 * (self.T1 + self.T2)

    @property
    def delta_t(self) -> float:
        return self.T1 - self.T2

    @property
    def gamma_bar(self) -> float:
        return 0.5 * (self.gamma1 + self.gamma2)

    def temperature(self, j: int) -> float:
        return self.T1 if j == 1 else self.T2

    def beta(self, j: int) -> float:
        return 1.0 / self.temperature(j)

    def gamma(self, j: int) -> float:
        return self.gamma1 if j == 1 else self.gamma2

    def validate(self, require_coupling: bool = True) -> "BathParams":
        """Checks T_j > 0, γ_j >= 0, γ₀ > 0 and, optionally, γ₁ + γ₂ > 0.

        Raises:
            InvalidBathParams: on the first violated condition.
        """

        problems = []
        if not (self.T1 > 0.0 and self.T2 > 0.0):
            problems.append(f"temperatures must be positive (T1={self.T1}, T2={self.T2})")
        if self.gamma1 < 0.0 or self.gamma2 < 0.0:
            problems.append(
                f"couplings must be nonnegative (gamma1={self.gamma1}, gamma2={self.gamma2})"
            )
        if not self.gamma0 > 0.0:
            problems.append(f"memory rate gamma0 must be positive (gamma0={self.gamma0})")
        if require_coupling and not self.gamma1 + self.gamma2 > 0.0:
            problems.append("at least one bath must couple (gamma1 + gamma2 > 0)")

        if problems:
            errors.raise_error(
                "Invalid bath parameters: " + "; ".join(problems) + ".",
                suggest_report=False,
                error=errors.InvalidBathParams,
            )
        return self

    @classmethod
    def from_mean(
        cls, t_mean: float, delta_t: float, gamma1: float, gamma2: float, gamma0: float
    ) -> "BathParams":
        """Builds baths from T_M and ΔT = T1 - T2."""

        return cls(
            T1=t_mean + 0.5 * delta_t,
            T2=t_mean - 0.5 * delta_t,
            gamma1=gamma1,
            gamma2=gamma2,
            gamma0=gamma0,
        )


@dataclass(frozen=True)
class TransitionCoeffs:
    """|c_{j,μ}|² for bath j ∈ {1, 2} (row j-1) and transition μ ∈ {1..4} (column μ-1)."""

    c2: np.ndarray

    def of(self, j: int, mu: int) -> float:
        return float(self.c2[j - 1, mu - 1])


@dataclass(frozen=True)
class RateSet:
    """Dissipative rates of the diagonal sector.

    X1p / X1m are the up / down rates across ω₁ = ξ - η (Σ⁺→Ψ⁺ and Ψ⁻→Σ⁻ count as up),
    Y2p / Y2m the up / down rates across ω₂ = ξ + η (Σ⁻→Ψ⁺ and Ψ⁻→Σ⁺ count as up).
    """

    X1p: float
    X1m: float
    Y2p: float
    Y2m: float
    xi: float = float("nan")
    eta: float = float("nan")

    @property
    def X1(self) -> float:
        return self.X1p + self.X1m

    @property
    def Y2(self) -> float:
        return self.Y2p + self.Y2m

    @property
    def omega1(self) -> float:
        return self.xi - self.eta

    @property
    def omega2(self) -> float:
        return self.xi + self.eta


def transition_frequencies(xi: float, eta: float) -> Tuple[float, float, float, float]:
    """(ω₁, ω₂, ω₃, ω₄) = (ξ-η, ξ+η, -ξ-η, η-ξ)."""
    return (xi - eta, xi + eta, -xi - eta, eta - xi)


def bose_occupation(omega: float, beta: float) -> float:
    """Thermal occupation n = 1 / (e^{βω} - 1) of a bath mode at frequency ω > 0.

    Raises:
        NonPositiveFrequency: if ω <= 0.
    """

    if not omega > 0.0:
        errors.raise_error(
            f"Bose occupation requires a positive frequency, got {omega}.",
            suggest_report=False,
            error=errors.NonPositiveFrequency,
        )
    exponent = beta * omega
    if exponent > 700.0:
        return 0.0
    return 1.0 / math.expm1(exponent)


def spectral_density(baths: BathParams, j: int, omega: float) -> float:
    """Flat-coupling spectral density of bath j at signed frequency ω.

    Returns γ_j n_j(ω) for ω > 0 (absorption) and γ_j (n_j(|ω|) + 1) for ω < 0
    (emission).

    Raises:
        ZeroFrequency: if ω = 0 (degenerate transition).
    """

    if omega == 0.0:
        errors.raise_error(
            f"Spectral density of bath {j} requested at zero frequency.",
            suggest_report=False,
            error=errors.ZeroFrequency,
        )
    occupation = bose_occupation(abs(omega), baths.beta(j))
    if omega > 0.0:
        return baths.gamma(j) * occupation
    return baths.gamma(j) * (occupation + 1.0)


def transition_coeffs(p: SystemParams) -> TransitionCoeffs:
    """Squared transition amplitudes of the dissipative operators.

    |c_{j,1}|² = |c_{j,4}|² = (ξη + J²χ + (-1)^j B b) / (2ξη)
    |c_{j,2}|² = |c_{j,3}|² = (ξη - J²χ - (-1)^j B b) / (2ξη)

    Raises:
        NegativeCoefficient: if a value falls below zero (reported, not clamped).
    """

    xi, eta = p.xi, p.eta
    product = xi * eta
    if not product > 0.0:
        errors.raise_error(
            f"Transition coefficients need ξη > 0, got ξ={xi}, η={eta}.",
            suggest_report=False,
            error=errors.DegenerateSpectrum,
        )

    c2 = np.zeros((2, 4))
    for j in BATHS:
        shift = p.J ** 2 * p.chi + (-1) ** j * p.B * p.b
        first = (product + shift) / (2.0 * product)
        second = (product - shift) / (2.0 * product)
        if first < 0.0 or second < 0.0:
            errors.raise_error(
                f"Negative transition coefficient for bath {j}: "
                + f"|c_1|² = {first:.6g}, |c_2|² = {second:.6g}.",
                suggest_report=False,
                error=errors.NegativeCoefficient,
            )
        c2[j - 1] = (first, second, second, first)

    c2.setflags(write=False)
    return TransitionCoeffs(c2=c2)


def rates(p: SystemParams, baths: BathParams, tol: Optional[float] = None) -> RateSet:
    """Rates X₁^± and Y₂^± of the diagonal-sector Lindbladian.

    X^± = 2 Σ_j J^(j)(±ω) |c_{j,·}|² with X carrying ω₁ = ξ - η and the μ ∈ {1, 4}
    coefficients, Y carrying ω₂ = ξ + η and the μ ∈ {2, 3} coefficients. The up rate
    takes the spectral density at +ω, which gives X₁^-/X₁^+ = e^{βω₁} at a common
    temperature and makes the steady state the Gibbs state. `tol` is the degeneracy
    tolerance handed to `validate_params`.
    """

    validated = validate_params(p, tol)
    baths.validate(require_coupling=False)
    coeffs = transition_coeffs(p)
    omega1, omega2 = validated.xi - validated.eta, validated.xi + validated.eta

    x_up = x_down = y_up = y_down = 0.0
    for j in BATHS:
        x_up += 2.0 * spectral_density(baths, j, omega1) * coeffs.of(j, 1)
        x_down += 2.0 * spectral_density(baths, j, -omega1) * coeffs.of(j, 1)
        y_up += 2.0 * spectral_density(baths, j, omega2) * coeffs.of(j, 2)
        y_down += 2.0 * spectral_density(baths, j, -omega2) * coeffs.of(j, 2)

    return RateSet(
        X1p=x_up, X1m=x_down, Y2p=y_up, Y2m=y_down, xi=validated.xi, eta=validated.eta
    )


def lindblad_diag_matrix(r: RateSet) -> np.ndarray:
    """Generator of the energy-basis populations (Ψ⁺, Ψ⁻, Σ⁺, Σ⁻); columns sum to 0."""

    a, a_, y, y_ = r.X1p, r.X1m, r.Y2p, r.Y2m
    return np.array(
        [
            [-(a_ + y_), 0.0, a, y],
            [0.0, -(a + y), y_, a_],
            [a_, y, -(a + y_), 0.0],
            [y_, a, 0.0, -(a_ + y)],
        ]
    )


def jordan_decomposition(
    r: RateSet, rel_tol: float = 1e-9
) -> Tuple[np.ndarray, np.ndarray]:
    """Closed-form eigenbasis S and eigenvalues J^(d) of `lindblad_diag_matrix`.

    J^(d) = (0, -X₁, -Y₂, -(X₁ + Y₂)).

    Raises:
        RateDegeneracy: if X₁ ≈ Y₂, a rate sum vanishes, or a divisor X₁^+, Y₂^- vanishes.
    """

    scale = max(r.X1, r.Y2, 0.0)
    problems = []
    if not (r.X1 > 0.0 and r.Y2 > 0.0):
        problems.append(f"X1={r.X1:.6g} and Y2={r.Y2:.6g} must be positive")
    elif abs(r.X1 - r.Y2) <= rel_tol * scale:
        problems.append(f"X1={r.X1:.12g} and Y2={r.Y2:.12g} coincide")
    if r.X1p <= rel_tol * scale or r.Y2m <= rel_tol * scale:
        problems.append(f"divisors X1+={r.X1p:.6g}, Y2-={r.Y2m:.6g} vanish")
    if problems:
        errors.raise_error(
            "Printed Jordan decomposition is singular: " + "; ".join(problems) + ".",
            suggest_report=False,
            error=errors.RateDegeneracy,
        )

    ry = r.Y2p / r.Y2m
    rx = r.X1m / r.X1p
    s_matrix = np.array(
        [
            [ry, ry, -1.0, -1.0],
            [rx, -1.0, rx, -1.0],
            [rx * ry, -ry, -rx, 1.0],
            [1.0, 1.0, 1.0, 1.0],
        ]
    )
    jd = np.array([0.0, -r.X1, -r.Y2, -(r.X1 + r.Y2)])
    return s_matrix, jd


def nondiag_eigenvalues(r: RateSet) -> np.ndarray:
    """Eigenvalues of the coherences (ρ₁₂, ρ₂₁, ρ₃₄, ρ₄₃) in the energy basis."""

    damping = 0.5 * (r.X1 + r.Y2)
    return np.array(
        [
            complex(-damping, -2.0 * r.xi),
            complex(-damping, 2.0 * r.xi),
            complex(-damping, -2.0 * r.eta),
            complex(-damping, 2.0 * r.eta),
        ]
    )
