"""Independent ground truth for the closed-form solution.

The exponential memory convolution ∫ k(t-s) e^{L(t-s)} L ρ(s) ds is traded for an
auxiliary operator u(t) = ∫₀ᵗ γ₀ e^{-γ₀(t-s)} e^{L(t-s)} ρ(s) ds, which turns the
integro-differential master equation into the local linear system

    ρ̇ = -i[H, ρ] + L u,    u̇ = γ₀ ρ + (L - γ₀) u,    u(0) = 0.

That system is integrated with classical fixed-step Runge-Kutta and step
halving. The dissipator is assembled from the numeric eigenvectors and the bath
spectral densities directly, without the diagonal-sector rate matrix.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from logzero import logger

from ..utils import errors
from . import appendix
from .correlations import (
    ConditionalEntropy,
    MatrixLike,
    angle_grid,
    bloch_directions,
    mutual_information,
    partial_trace,
    von_neumann_entropy,
)
from .dissipator import BATHS, BathParams, RateSet, lindblad_diag_matrix, spectral_density
from .model import STANDARD, DensityMatrix, SystemParams, build_hamiltonian, spectrum
from .propagator import population_propagator

MODES = ("hamiltonian_outside", "hamiltonian_inside")
KERNELS = ("exponential", "delta")

APPENDIX_FLAG_TOL = 1e-6

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
LOCAL_SIGMA_X = (np.kron(SIGMA_X, np.eye(2)), np.kron(np.eye(2), SIGMA_X))


@dataclass(frozen=True)
class OracleConfig:
    """Settings of the master-equation integrator.

    Attributes:
        mode (str): "hamiltonian_outside" keeps the commutator out of the memory
            convolution; "hamiltonian_inside" convolves the full generator.
        step (float): initial Runge-Kutta step, clamped to 1/‖generator‖.
        t_max (float): end of the default time grid.
        tolerance (float): largest accepted change between successive halvings.
        kernel (str): "exponential" memory kernel or memoryless "delta".
        max_halvings (int): halvings allowed before giving up.
        degeneracy_tol (float, optional): tolerance on |ξ - η| for the spectrum;
            None uses the `validate_params` default.
    """

    mode: str = "hamiltonian_outside"
    step: float = 0.05
    t_max: float = 10.0
    tolerance: float = 1e-9
    kernel: str = "exponential"
    max_halvings: int = 12
    degeneracy_tol: Optional[float] = None

    def __post_init__(self):
        problems = []
        if self.mode not in MODES:
            problems.append(f"mode must be one of {MODES}, got '{self.mode}'")
        if self.kernel not in KERNELS:
            problems.append(f"kernel must be one of {KERNELS}, got '{self.kernel}'")
        if not self.step > 0.0:
            problems.append(f"step must be positive, got {self.step}")
        if not self.tolerance > 0.0:
            problems.append(f"tolerance must be positive, got {self.tolerance}")
        if not self.t_max > 0.0:
            problems.append(f"t_max must be positive, got {self.t_max}")
        if problems:
            errors.raise_error(
                "Invalid oracle configuration: " + "; ".join(problems) + ".",
                suggest_report=False,
                error=errors.ConfigError,
            )


@dataclass(frozen=True)
class AppendixFlag:
    """A printed element that disagrees with S diag(ξ) S⁻¹."""

    i: int
    j: int
    deviation: float
    repair: Optional[str] = None
    repaired_deviation: float = float("nan")


@dataclass
class ComparisonReport:
    t_grid: np.ndarray
    deviations: Dict[str, float]
    element_deviation: np.ndarray
    flags: List[AppendixFlag] = field(default_factory=list)

    @property
    def unrepaired(self) -> List[AppendixFlag]:
        return [flag for flag in self.flags if flag.repair is None]


def commutator_superoperator(hamiltonian: np.ndarray) -> np.ndarray:
    """-i[H, ·] acting on row-major vec(ρ)."""

    identity = np.eye(hamiltonian.shape[0])
    return -1j * (np.kron(hamiltonian, identity) - np.kron(identity, hamiltonian.T))


def dissipator_superoperator(jump_ops: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """Σ γ (L ρ L† - ½{L†L, ρ}) acting on row-major vec(ρ)."""

    dim = jump_ops.shape[1]
    identity = np.eye(dim)
    superop = np.zeros((dim * dim, dim * dim), dtype=complex)
    for op, gamma in zip(jump_ops, gammas):
        squared = op.conj().T @ op
        superop += gamma * (
            np.kron(op, op.conj())
            - 0.5 * np.kron(squared, identity)
            - 0.5 * np.kron(identity, squared.T)
        )
    return superop


def jump_operators(
    p: SystemParams, baths: BathParams, tol: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Transition operators |upper><lower| and |lower><upper| with their rates.

    Every Ψ level is paired with every Σ level. A transition that changes the energy
    by ω has rate 2 Σ_j J_j(ω) |<Ψ|σ_j^x|Σ>|² with the signed spectral density.
    """

    s = spectrum(p, tol)
    vectors, energies = s.eigenvectors, s.energies
    ops, gammas = [], []
    for psi in (0, 1):
        for sigma in (2, 3):
            omega = energies[psi] - energies[sigma]
            weights = [
                abs(vectors[:, psi].conj() @ LOCAL_SIGMA_X[j - 1] @ vectors[:, sigma]) ** 2
                for j in BATHS
            ]
            towards_psi = np.outer(vectors[:, psi], vectors[:, sigma].conj())
            for op, signed in ((towards_psi, omega), (towards_psi.conj().T, -omega)):
                rate = sum(
                    2.0 * spectral_density(baths, j, signed) * weight
                    for j, weight in zip(BATHS, weights)
                )
                ops.append(op)
                gammas.append(rate)
    return np.array(ops), np.array(gammas)


def master_generator(p: SystemParams, baths: BathParams, cfg: OracleConfig) -> np.ndarray:
    """Generator of (vec ρ, vec u) for the exponential kernel, or of vec ρ for delta."""

    hamiltonian_part = commutator_superoperator(build_hamiltonian(p))
    dissipative = dissipator_superoperator(*jump_operators(p, baths, cfg.degeneracy_tol))
    full = hamiltonian_part + dissipative

    if cfg.kernel == "delta":
        return full

    size = full.shape[0]
    identity = np.eye(size)
    gamma0 = baths.gamma0
    if cfg.mode == "hamiltonian_inside":
        top = np.hstack([np.zeros((size, size)), full])
        bottom = np.hstack([gamma0 * identity, full - gamma0 * identity])
    else:
        top = np.hstack([hamiltonian_part, dissipative])
        bottom = np.hstack([gamma0 * identity, dissipative - gamma0 * identity])
    return np.vstack([top, bottom])


def rk4_step(generator: np.ndarray, y: np.ndarray, h: float) -> np.ndarray:
    k1 = generator @ y
    k2 = generator @ (y + 0.5 * h * k1)
    k3 = generator @ (y + 0.5 * h * k2)
    k4 = generator @ (y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_trajectory(
    generator: np.ndarray, y0: np.ndarray, t_grid: Sequence[float], step: float
) -> np.ndarray:
    """Integrates y' = G y from t = 0, landing on every grid time with equal substeps."""

    y = np.array(y0, dtype=complex)
    out = np.empty((len(t_grid),) + y.shape, dtype=complex)
    previous = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for index, t in enumerate(t_grid):
            span = float(t) - previous
            if span < 0.0:
                raise ValueError("Oracle time grid must be nondecreasing and start at t >= 0.")
            substeps = int(math.ceil(span / step - 1e-9)) if span > 0.0 else 0
            for _ in range(substeps):
                y = rk4_step(generator, y, span / substeps)
            out[index] = y
            previous = float(t)
    return out


def integrate_with_halving(
    generator: np.ndarray, y0: np.ndarray, t_grid: Sequence[float], cfg: OracleConfig
) -> np.ndarray:
    """Halves the step until two successive refinements agree within the tolerance.

    Raises:
        NonConvergence: if `cfg.max_halvings` halvings do not reach the tolerance.
    """

    scale = max(float(np.linalg.norm(generator, ord=2)), 1e-12)
    step = min(cfg.step, 1.0 / scale)
    coarse = rk4_trajectory(generator, y0, t_grid, step)
    for halving in range(1, cfg.max_halvings + 1):
        step *= 0.5
        fine = rk4_trajectory(generator, y0, t_grid, step)
        change = float(np.max(np.abs(fine - coarse)))
        logger.debug("Oracle halving %d: step %.3e, change %.3e.", halving, step, change)
        if change < cfg.tolerance:
            return fine
        coarse = fine

    errors.raise_error(
        f"Oracle integration did not converge to {cfg.tolerance:.1e} after "
        + f"{cfg.max_halvings} step halvings (last step {step:.3e}).",
        suggest_report=False,
        error=errors.NonConvergence,
    )
    return coarse


def _default_grid(cfg: OracleConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.t_max, 101)


def _initial_vector(rho0: DensityMatrix, cfg: OracleConfig) -> np.ndarray:
    if rho0.basis != STANDARD:
        errors.raise_error(
            f"Oracle needs a standard-basis initial state, got '{rho0.basis}'.",
            suggest_report=False,
            error=errors.BasisMismatch,
        )
    vec = rho0.elements.reshape(-1)
    if cfg.kernel == "delta":
        return vec
    return np.concatenate([vec, np.zeros_like(vec)])


def _states(raw: np.ndarray) -> List[DensityMatrix]:
    return [DensityMatrix(row[:16].reshape(4, 4), STANDARD) for row in raw]


def integrate_master_equation(
    rho0: DensityMatrix,
    p: SystemParams,
    baths: BathParams,
    cfg: OracleConfig = OracleConfig(),
    t_grid: Optional[Sequence[float]] = None,
) -> List[DensityMatrix]:
    """Numerically integrates the master equation from ρ(0) = rho0.

    Args:
        rho0 (DensityMatrix): initial state in the standard basis (any shape, not
            only X states).
        p (SystemParams): system parameters.
        baths (BathParams): bath parameters.
        cfg (OracleConfig, optional): integrator settings.
        t_grid (Sequence[float], optional): output times; defaults to 101 points on
            [0, cfg.t_max].

    Returns:
        List[DensityMatrix]: the state at every grid time, standard basis.
    """

    baths.validate(require_coupling=False)
    grid = _default_grid(cfg) if t_grid is None else np.asarray(t_grid, dtype=float)
    generator = master_generator(p, baths, cfg)
    raw = integrate_with_halving(generator, _initial_vector(rho0, cfg), grid, cfg)
    return _states(raw)


def integrate_fixed_step(
    rho0: DensityMatrix,
    p: SystemParams,
    baths: BathParams,
    step: float,
    t_grid: Sequence[float],
    cfg: OracleConfig = OracleConfig(),
) -> List[DensityMatrix]:
    """One Runge-Kutta pass at a fixed step, with no halving."""

    generator = master_generator(p, baths, cfg)
    raw = rk4_trajectory(generator, _initial_vector(rho0, cfg), t_grid, step)
    return _states(raw)


def population_oracle(
    r: RateSet, gamma0: float, t_grid: Sequence[float], cfg: OracleConfig = OracleConfig()
) -> np.ndarray:
    """P(t) from integrating P' = L U, U' = γ₀P + (L - γ₀)U with P(0) = I, U(0) = 0."""

    rates = lindblad_diag_matrix(r)
    identity = np.eye(4)
    generator = np.block(
        [[np.zeros((4, 4)), rates], [gamma0 * identity, rates - gamma0 * identity]]
    )
    y0 = np.vstack([identity, np.zeros((4, 4))])
    raw = integrate_with_halving(generator, y0, t_grid, cfg)
    return np.real(raw[:, :4, :])


def energy_population_oracle(
    p: SystemParams,
    baths: BathParams,
    t_grid: Sequence[float],
    cfg: OracleConfig = OracleConfig(),
) -> np.ndarray:
    """P(t) column by column from the full master equation started in each eigenstate."""

    s = spectrum(p, cfg.degeneracy_tol)
    columns = []
    for k in range(4):
        start = DensityMatrix.from_pure(s.eigenvectors[:, k])
        states = integrate_master_equation(start, p, baths, cfg, t_grid)
        unitary = s.eigenvectors
        columns.append(
            [np.real(np.diag(unitary.conj().T @ state.elements @ unitary)) for state in states]
        )
    return np.transpose(np.array(columns), (1, 2, 0))


def classical_correlation_grid(rho: MatrixLike, side: str, n_theta: int, n_phi: int) -> float:
    """Maximum classical correlation over the full θ×φ grid.

    The grid has θ = πk/n_theta (poles included) and φ = 2πk/n_phi, so a grid whose
    sizes divide another's is a subset of it.
    """

    if n_theta < 2 or n_phi < 2:
        errors.raise_error(
            f"Grid oracle needs at least 2x2 points, got {n_theta}x{n_phi}.",
            suggest_report=False,
            error=errors.ConfigError,
        )
    objective = ConditionalEntropy(rho, side)
    theta, phi = angle_grid(n_theta, n_phi)
    best = np.inf
    chunk = 1 << 16
    for start in range(0, theta.size, chunk):
        directions = bloch_directions(theta[start : start + chunk], phi[start : start + chunk])
        best = min(best, float(np.min(objective(directions))))
    kept = "A" if side == "B" else "B"
    return von_neumann_entropy(partial_trace(rho, kept)) - best


def discord_grid_oracle(rho: MatrixLike, side: str, n_theta: int, n_phi: int) -> float:
    """Discord with `side` measured, maximizing over the full grid only."""

    return mutual_information(rho) - classical_correlation_grid(rho, side, n_theta, n_phi)


def _repair(
    element: appendix.Element,
    r: RateSet,
    gamma0: float,
    t_grid: Sequence[float],
    reference: np.ndarray,
) -> Tuple[Optional[str], float]:
    values = appendix.symbol_values(r, gamma0)
    for description, variant in appendix.single_sign_repairs(element):
        candidate = np.array([variant.value(values, float(t)) for t in t_grid])
        deviation = float(np.max(np.abs(candidate - reference)))
        if deviation <= APPENDIX_FLAG_TOL:
            return description, deviation
    return None, float("nan")


def compare_propagators(
    r: RateSet,
    gamma0: float,
    t_grid: Sequence[float],
    cfg: OracleConfig = OracleConfig(),
    params: Optional[SystemParams] = None,
    baths: Optional[BathParams] = None,
) -> ComparisonReport:
    """Element-wise comparison of the printed table, S diag(ξ) S⁻¹ and the ODE oracle.

    With `params` and `baths` the oracle integrates the full master equation;
    otherwise it integrates the population sector built from `r`.
    """

    grid = np.asarray(t_grid, dtype=float)
    s_path = np.array([population_propagator(r, gamma0, float(t)) for t in grid])
    printed = np.array([appendix.evaluate_table(r, gamma0, float(t)) for t in grid])
    if params is not None and baths is not None:
        oracle = energy_population_oracle(params, baths, grid, cfg)
    else:
        oracle = population_oracle(r, gamma0, grid, cfg)

    element_deviation = np.max(np.abs(printed - s_path), axis=0)
    deviations = {
        "s_path_vs_oracle": float(np.max(np.abs(s_path - oracle))),
        "appendix_vs_s_path": float(np.max(element_deviation)),
        "appendix_vs_oracle": float(np.max(np.abs(printed - oracle))),
    }

    flags = []
    for (i, j), element in sorted(appendix.PRINTED_TABLE.items()):
        deviation = float(element_deviation[i - 1, j - 1])
        if not deviation <= APPENDIX_FLAG_TOL:
            repair, repaired = _repair(element, r, gamma0, grid, s_path[:, i - 1, j - 1])
            flags.append(AppendixFlag(i, j, deviation, repair, repaired))
            logger.debug("p%d%d deviates by %.3e; repair: %s.", i, j, deviation, repair)

    return ComparisonReport(
        t_grid=grid, deviations=deviations, element_deviation=element_deviation, flags=flags
    )
