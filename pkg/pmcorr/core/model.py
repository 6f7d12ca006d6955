"""System Hamiltonian, its analytic spectrum and the density-matrix type.

Conventions: ħ = k_B = 1, single-qubit basis {|0>, |1>} with σ^z|0> = |0>, and the
two-qubit standard basis ordered {|00>, |01>, |10>, |11>}. The energy basis is
ordered (Ψ⁺, Ψ⁻, Σ⁺, Σ⁻) with energies (+ξ, −ξ, +η, −η).
"""

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from logzero import logger

from ..utils import errors

STANDARD = "standard"
ENERGY = "energy"
BASES = (STANDARD, ENERGY)

PSI_SUPPORT = (1, 2)
SIGMA_SUPPORT = (0, 3)

# (row, col) entries an X-shaped state may populate in the standard basis.
X_MASK = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
    ],
    dtype=bool,
)

DEGENERACY_RELATIVE_TOL = 1e-6


@dataclass(frozen=True)
class SystemParams:
    """Couplings and fields of the two-qubit XY Hamiltonian with DM interaction.

    Attributes:
        J (float): mean XY coupling.
        chi (float): partial anisotropy, -1 <= chi <= 1.
        B (float): mean magnetic field.
        b (float): field inhomogeneity (qubit 1 sees B + b, qubit 2 sees B - b).
        D (float): Dzyaloshinskii-Moriya strength in units of J.
    """

    J: float
    chi: float
    B: float
    b: float
    D: float

    @property
    def xi(self) -> float:
        """Energy scale of the Ψ (single-excitation) block."""
        return math.sqrt(self.b ** 2 + self.J ** 2 * (1.0 + self.D ** 2))

    @property
    def eta(self) -> float:
        """Energy scale of the Σ (zero/double-excitation) block."""
        return math.sqrt(self.B ** 2 + (self.J * self.chi) ** 2)


@dataclass(frozen=True)
class ValidatedParams:
    """System parameters that passed `validate_params`, with ξ and η cached."""

    params: SystemParams
    xi: float
    eta: float
    tol: float


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues and phase-fixed eigenvectors of the system Hamiltonian.

    Column k of `eigenvectors` is |ε_k> in the standard basis, in the order
    (Ψ⁺, Ψ⁻, Σ⁺, Σ⁻).
    """

    xi: float
    eta: float
    energies: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 two-qubit density matrix tagged with the basis it is written in."""

    elements: np.ndarray
    basis: str = STANDARD

    def __post_init__(self):
        elements = np.array(self.elements, dtype=complex)
        if elements.shape != (4, 4):
            errors.raise_error(
                f"Density matrix must be 4x4, got shape {elements.shape}.",
                suggest_report=False,
                error=errors.NotDensityMatrix,
            )
        if self.basis not in BASES:
            errors.raise_error(
                f"Unknown basis tag '{self.basis}', expected one of {BASES}.",
                suggest_report=False,
                error=errors.BasisMismatch,
            )
        elements.setflags(write=False)
        object.__setattr__(self, "elements", elements)

    @classmethod
    def from_pure(cls, state: np.ndarray, basis: str = STANDARD) -> "DensityMatrix":
        """Builds |ψ><ψ| from a (not necessarily normalized) state vector."""

        vector = np.asarray(state, dtype=complex)
        vector = vector / np.linalg.norm(vector)
        return cls(np.outer(vector, vector.conj()), basis)

    @property
    def eigenvalues(self) -> np.ndarray:
        hermitian = 0.5 * (self.elements + self.elements.conj().T)
        return np.linalg.eigvalsh(hermitian)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def trace_error(self) -> float:
        return float(abs(np.trace(self.elements) - 1.0))

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.elements - self.elements.conj().T)))

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.elements @ self.elements)))

    def violations(
        self, herm_tol: float = 1e-12, trace_tol: float = 1e-10, psd_tol: float = 1e-9
    ) -> List[str]:
        """Lists which density-matrix invariants this matrix breaks.

        Returns:
            List[str]: short labels ("hermiticity", "trace", "positivity"); empty if valid.
        """

        found = []
        if self.hermiticity_error > herm_tol:
            found.append("hermiticity")
        if self.trace_error > trace_tol:
            found.append("trace")
        if self.min_eigenvalue < -psd_tol:
            found.append("positivity")
        return found

    def check(self, **tolerances: float) -> "DensityMatrix":
        """Raises NotDensityMatrix if any invariant is broken, otherwise returns self."""

        found = self.violations(**tolerances)
        if found:
            errors.raise_error(
                f"Matrix is not a valid density matrix: {', '.join(found)} violated "
                + f"(trace error {self.trace_error:.3e}, "
                + f"min eigenvalue {self.min_eigenvalue:.3e}).",
                suggest_report=False,
                error=errors.NotDensityMatrix,
            )
        return self


def validate_params(p: SystemParams, tol: Optional[float] = None) -> ValidatedParams:
    """Checks that the analytic solution is defined for these parameters.

    Args:
        p (SystemParams): parameters to check.
        tol (float, optional): degeneracy tolerance on |ξ - η|, ξ and η. Defaults to
            1e-6 * max(ξ, η).

    Raises:
        InvalidAnisotropy: |chi| > 1.
        DegenerateSpectrum: ξ = η, ξ = 0 or η = 0 within `tol`.

    Returns:
        ValidatedParams: `p` with ξ and η cached.
    """

    values = (p.J, p.chi, p.B, p.b, p.D)
    if not all(math.isfinite(v) for v in values):
        errors.raise_error(
            f"System parameters must be finite, got {p}.",
            suggest_report=False,
            error=errors.PhysicsDomainError,
        )

    if abs(p.chi) > 1.0:
        errors.raise_error(
            f"Partial anisotropy chi must lie in [-1, 1], got {p.chi}.",
            suggest_report=False,
            error=errors.InvalidAnisotropy,
        )

    xi, eta = p.xi, p.eta
    if tol is None:
        tol = DEGENERACY_RELATIVE_TOL * max(xi, eta)

    if xi <= tol:
        errors.raise_error(
            f"Zero Ψ splitting (ξ = {xi:.6g}): Ψ⁺ and Ψ⁻ are degenerate.",
            suggest_report=False,
            error=errors.DegenerateSpectrum,
        )
    if eta <= tol:
        errors.raise_error(
            f"Zero Σ splitting (η = {eta:.6g}): Σ⁺ and Σ⁻ are degenerate.",
            suggest_report=False,
            error=errors.DegenerateSpectrum,
        )
    if abs(xi - eta) <= tol:
        errors.raise_error(
            f"Spectrum is degenerate at ξ = η (ξ = {xi:.10g}, η = {eta:.10g}, tol = {tol:.3g}); "
            + "the closed-form solution is undefined at this critical point.",
            suggest_report=False,
            error=errors.DegenerateSpectrum,
        )

    return ValidatedParams(params=p, xi=xi, eta=eta, tol=tol)


def build_hamiltonian(p: SystemParams) -> np.ndarray:
    """System Hamiltonian in the standard basis {|00>, |01>, |10>, |11>}.

    H = Jχ(σ₁⁺σ₂⁺ + σ₁⁻σ₂⁻) + J(1+iD)σ₁⁺σ₂⁻ + J(1-iD)σ₁⁻σ₂⁺ + (B+b)/2 σ₁ᶻ + (B-b)/2 σ₂ᶻ
    """

    hopping = p.J * complex(1.0, p.D)
    pairing = p.J * p.chi
    hamiltonian = np.array(
        [
            [p.B, 0.0, 0.0, pairing],
            [0.0, p.b, hopping, 0.0],
            [0.0, hopping.conjugate(), -p.b, 0.0],
            [pairing, 0.0, 0.0, -p.B],
        ],
        dtype=complex,
    )
    return hamiltonian


def _fix_phase(vector: np.ndarray, reference: int, fallback: int) -> np.ndarray:
    index = reference if abs(vector[reference]) > 1e-12 else fallback
    return vector * np.exp(-1j * np.angle(vector[index]))


def spectrum(p: SystemParams, tol: Optional[float] = None) -> Spectrum:
    """Numerically diagonalizes H and assigns the Ψ±/Σ± branches.

    Branches are assigned by block support and the sign of the eigenvalue, then the
    phase is fixed so that the |10> component of Ψ± and the |11> component of Σ±
    are real and nonnegative (falling back to |01> / |00> when that component
    vanishes).

    Raises:
        DegenerateSpectrum: propagated from `validate_params`.
    """

    validated = validate_params(p, tol)
    hamiltonian = build_hamiltonian(p)
    values, vectors = np.linalg.eigh(hamiltonian)

    psi_weight = np.sum(np.abs(vectors[list(PSI_SUPPORT), :]) ** 2, axis=0)
    psi_columns = [k for k in range(4) if psi_weight[k] > 0.5]
    sigma_columns = [k for k in range(4) if psi_weight[k] <= 0.5]
    if len(psi_columns) != 2 or len(sigma_columns) != 2:
        errors.raise_error(
            f"Could not split eigenvectors into Ψ and Σ blocks (Ψ weights {psi_weight})."
        )

    psi_columns.sort(key=lambda k: -values[k])
    sigma_columns.sort(key=lambda k: -values[k])

    eigenvectors = np.zeros((4, 4), dtype=complex)
    for position, column in enumerate(psi_columns + sigma_columns):
        vector = vectors[:, column].copy()
        if position < 2:
            vector[list(SIGMA_SUPPORT)] = 0.0
            vector = _fix_phase(vector, reference=2, fallback=1)
        else:
            vector[list(PSI_SUPPORT)] = 0.0
            vector = _fix_phase(vector, reference=3, fallback=0)
        eigenvectors[:, position] = vector / np.linalg.norm(vector)

    xi, eta = validated.xi, validated.eta
    energies = np.array([xi, -xi, eta, -eta])
    numeric = values[psi_columns + sigma_columns]
    deviation = float(np.max(np.abs(numeric - energies)))
    if deviation > 1e-10 * max(1.0, xi, eta):
        errors.raise_error(
            f"Numeric eigenvalues {numeric} disagree with analytic (±ξ, ±η) = {energies} "
            + f"by {deviation:.3e}."
        )

    logger.debug("Spectrum: ξ = %.10g, η = %.10g.", xi, eta)
    energies.setflags(write=False)
    eigenvectors.setflags(write=False)
    return Spectrum(xi=xi, eta=eta, energies=energies, eigenvectors=eigenvectors)


def critical_D(J: float, chi: float, B: float, b: float) -> float:
    """Spin-orbit strength D_c >= 0 at which ξ = η.

    Raises:
        NoCriticalPoint: if J = 0 or B² + (Jχ)² - b² - J² < 0.
    """

    if J == 0.0:
        errors.raise_error(
            "No critical D exists when J = 0 (ξ does not depend on D).",
            suggest_report=False,
            error=errors.NoCriticalPoint,
        )

    radicand = (B ** 2 + (J * chi) ** 2 - b ** 2) / J ** 2 - 1.0
    if radicand < 0.0:
        errors.raise_error(
            f"No real critical D for J={J}, chi={chi}, B={B}, b={b} (radicand {radicand:.6g} < 0).",
            suggest_report=False,
            error=errors.NoCriticalPoint,
        )

    return math.sqrt(radicand)


def to_energy_basis(rho: DensityMatrix, s: Spectrum) -> DensityMatrix:
    """Rewrites a standard-basis state in the energy basis, ρ' = U†ρU."""

    if rho.basis != STANDARD:
        errors.raise_error(
            f"Expected a standard-basis state, got basis '{rho.basis}'.",
            suggest_report=False,
            error=errors.BasisMismatch,
        )
    unitary = s.eigenvectors
    return DensityMatrix(unitary.conj().T @ rho.elements @ unitary, ENERGY)


def from_energy_basis(rho: DensityMatrix, s: Spectrum) -> DensityMatrix:
    """Rewrites an energy-basis state in the standard basis, ρ = Uρ'U†."""

    if rho.basis != ENERGY:
        errors.raise_error(
            f"Expected an energy-basis state, got basis '{rho.basis}'.",
            suggest_report=False,
            error=errors.BasisMismatch,
        )
    unitary = s.eigenvectors
    return DensityMatrix(unitary @ rho.elements @ unitary.conj().T, STANDARD)


def x_shape_residual(rho: DensityMatrix) -> float:
    """Largest magnitude outside the X pattern of a standard-basis state."""

    if rho.basis != STANDARD:
        errors.raise_error(
            f"X shape is defined in the standard basis, got basis '{rho.basis}'.",
            suggest_report=False,
            error=errors.BasisMismatch,
        )
    outside = np.abs(rho.elements[~X_MASK])
    return float(outside.max()) if outside.size else 0.0
