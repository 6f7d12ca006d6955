"""Entanglement and quantum-discord measures of two-qubit states, in bits.

Discord is computed over rank-1 projective measurements on one qubit. A state is
written in Bloch form ρ = ¼(I + a·σ⊗I + I⊗b·σ + Σ T_ij σ_i⊗σ_j), so that measuring
qubit B along n leaves qubit A with probability p± = ½(1 ± b·n) in the state
with Bloch vector (a ± T n)/(1 ± b·n). Whole grids of directions are evaluated
at once.
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from logzero import logger

from ..utils import errors
from .model import STANDARD, DensityMatrix

SIDES = ("A", "B")

ENTROPY_CLAMP = 1e-9
BRANCH_PROBABILITY_FLOOR = 1e-12
DISCORD_CLAMP = 1e-7
OPTIMIZER_GAP_TARGET = 1e-6

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
SPIN_FLIP = np.kron(PAULI[1], PAULI[1])

MatrixLike = Union[DensityMatrix, np.ndarray]


@dataclass(frozen=True)
class MeasurementSetting:
    """Projective basis {|±n><±n|} on one qubit, n at polar angle θ and azimuth φ."""

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta) % (2.0 * np.pi)
        phi = float(self.phi)
        if theta > np.pi:
            theta = 2.0 * np.pi - theta
            phi += np.pi
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi % (2.0 * np.pi))

    @property
    def direction(self) -> np.ndarray:
        return bloch_directions(np.array([self.theta]), np.array([self.phi]))[0]


@dataclass(frozen=True)
class OptimizerConfig:
    """Coarse grid plus pattern-search refinement of the measurement direction.

    The coarse grid has θ = πk/n_theta for k = 0..n_theta and φ = 2πk/n_phi for
    k = 0..n_phi-1.
    """

    n_theta: int = 64
    n_phi: int = 128
    iterations: int = 40
    shrink: float = 0.5

    def __post_init__(self):
        if self.n_theta < 1 or self.n_phi < 1 or self.iterations < 0:
            errors.raise_error(
                f"Optimizer grid needs n_theta, n_phi >= 1 and iterations >= 0, got {self}.",
                suggest_report=False,
                error=errors.ConfigError,
            )
        if not 0.0 < self.shrink < 1.0:
            errors.raise_error(
                f"Optimizer shrink factor must lie in (0, 1), got {self.shrink}.",
                suggest_report=False,
                error=errors.ConfigError,
            )


@dataclass(frozen=True)
class MeasurementResult:
    """Outcome of `optimize_measurement`; `gap` is the spread of the objective over the
    final stencil, infinite when no refinement ran."""

    classical_correlation: float
    setting: MeasurementSetting
    gap: float


@dataclass(frozen=True)
class CorrelationReport:
    concurrence: float
    mutual_info: float
    classical_corr_A: float
    classical_corr_B: float
    discord_A: float
    discord_B: float
    optimal_angles_A: Tuple[float, float]
    optimal_angles_B: Tuple[float, float]
    optimizer_gap: float


def _matrix(rho: MatrixLike) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        if rho.basis != STANDARD:
            errors.raise_error(
                f"Correlation measures need a standard-basis state, got '{rho.basis}'.",
                suggest_report=False,
                error=errors.BasisMismatch,
            )
        return rho.elements
    return np.asarray(rho, dtype=complex)


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise ValueError(f"Measured side must be one of {SIDES}, got '{side}'.")


def partial_trace(rho: MatrixLike, keep: str) -> np.ndarray:
    """Reduced 2x2 state of qubit `keep` ("A" or "B")."""

    _check_side(keep)
    tensor = _matrix(rho).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", tensor)
    return np.einsum("ijil->jl", tensor)


def von_neumann_entropy(rho: MatrixLike) -> float:
    """S(ρ) = -Tr ρ log₂ ρ for a 2x2 or 4x4 density matrix.

    Raises:
        NotDensityMatrix: if ρ is not Hermitian, not unit trace or has an eigenvalue
            below -1e-9.
    """

    matrix = _matrix(rho)
    if np.max(np.abs(matrix - matrix.conj().T)) > 1e-10 or abs(np.trace(matrix) - 1.0) > 1e-8:
        errors.raise_error(
            "Entropy requested for a matrix that is not a normalized Hermitian state.",
            suggest_report=False,
            error=errors.NotDensityMatrix,
        )
    eigenvalues = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))
    if eigenvalues[0] < -ENTROPY_CLAMP:
        errors.raise_error(
            f"Entropy requested for a matrix with eigenvalue {eigenvalues[0]:.3e} < 0.",
            suggest_report=False,
            error=errors.NotDensityMatrix,
        )
    positive = eigenvalues[eigenvalues > 0.0]
    return float(-np.sum(positive * np.log2(positive)))


def _binary_entropy(radius: np.ndarray) -> np.ndarray:
    """Entropy of a qubit state whose Bloch vector has length `radius`."""

    radius = np.clip(radius, 0.0, 1.0)
    entropy = np.zeros_like(radius)
    for sign in (1.0, -1.0):
        weight = 0.5 * (1.0 + sign * radius)
        mask = weight > 0.0
        entropy[mask] -= weight[mask] * np.log2(weight[mask])
    return entropy


def concurrence(rho: MatrixLike) -> float:
    """Wootters concurrence from the square roots of the eigenvalues of ρρ̃."""

    matrix = _matrix(rho)
    flipped = SPIN_FLIP @ matrix.conj() @ SPIN_FLIP
    eigenvalues = np.clip(np.real(np.linalg.eigvals(matrix @ flipped)), 0.0, None)
    lambdas = np.sort(np.sqrt(eigenvalues))[::-1]
    return float(max(0.0, lambdas[0] - lambdas[1:].sum()))


def concurrence_hermitian(rho: MatrixLike) -> float:
    """Concurrence from the eigenvalues of R = √(√ρ ρ̃ √ρ)."""

    matrix = _matrix(rho)
    values, vectors = np.linalg.eigh(0.5 * (matrix + matrix.conj().T))
    root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    flipped = SPIN_FLIP @ matrix.conj() @ SPIN_FLIP
    product = root @ flipped @ root
    eigenvalues = np.linalg.eigvalsh(0.5 * (product + product.conj().T))
    lambdas = np.sort(np.sqrt(np.clip(eigenvalues, 0.0, None)))[::-1]
    return float(max(0.0, lambdas[0] - lambdas[1:].sum()))


def mutual_information(rho: MatrixLike) -> float:
    """I = S(ρ_A) + S(ρ_B) - S(ρ_AB)."""

    return (
        von_neumann_entropy(partial_trace(rho, "A"))
        + von_neumann_entropy(partial_trace(rho, "B"))
        - von_neumann_entropy(rho)
    )


def bloch_decomposition(rho: MatrixLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors a, b and correlation tensor T_ij = Tr ρ σ_i⊗σ_j."""

    matrix = _matrix(rho)
    identity = np.eye(2)
    a = np.array([np.real(np.trace(matrix @ np.kron(s, identity))) for s in PAULI])
    b = np.array([np.real(np.trace(matrix @ np.kron(identity, s))) for s in PAULI])
    tensor = np.array(
        [[np.real(np.trace(matrix @ np.kron(si, sj))) for sj in PAULI] for si in PAULI]
    )
    return a, b, tensor


def bloch_directions(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    sin_theta = np.sin(theta)
    return np.stack([sin_theta * np.cos(phi), sin_theta * np.sin(phi), np.cos(theta)], axis=-1)


class ConditionalEntropy:
    """Σ p± S(ρ±) after measuring `side` along many directions at once."""

    def __init__(self, rho: MatrixLike, side: str):
        _check_side(side)
        a, b, tensor = bloch_decomposition(rho)
        if side == "B":
            self.unmeasured, self.measured, self.tensor = a, b, tensor
        else:
            self.unmeasured, self.measured, self.tensor = b, a, tensor.T

    def __call__(self, directions: np.ndarray) -> np.ndarray:
        projection = directions @ self.measured
        correlated = directions @ self.tensor.T
        total = np.zeros(directions.shape[0])
        for sign in (1.0, -1.0):
            weight = 1.0 + sign * projection
            probability = 0.5 * weight
            live = probability > BRANCH_PROBABILITY_FLOOR
            vectors = self.unmeasured + sign * correlated[live]
            radius = np.linalg.norm(vectors, axis=1) / weight[live]
            total[live] += probability[live] * _binary_entropy(radius)
        return total


def conditional_entropy(rho: MatrixLike, side: str, m: MeasurementSetting) -> float:
    """Entropy left on the other qubit after measuring `side` in the basis `m`."""

    return float(ConditionalEntropy(rho, side)(m.direction[np.newaxis, :])[0])


def _normalize_angles(theta: np.ndarray, phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Reflects θ back into [0, π] across the poles and wraps φ into [0, 2π)."""

    theta = np.mod(theta, 2.0 * np.pi)
    flipped = theta > np.pi
    theta = np.where(flipped, 2.0 * np.pi - theta, theta)
    phi = np.where(flipped, phi + np.pi, phi)
    return theta, np.mod(phi, 2.0 * np.pi)


def angle_grid(n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray]:
    """θ = πk/n_theta (poles included) crossed with φ = 2πk/n_phi, flattened."""

    theta = np.pi * np.arange(n_theta + 1) / n_theta
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    grid_theta, grid_phi = np.meshgrid(theta, phi, indexing="ij")
    return grid_theta.ravel(), grid_phi.ravel()


def optimize_measurement(
    rho: MatrixLike, side: str, cfg: OptimizerConfig = OptimizerConfig()
) -> MeasurementResult:
    """Maximizes the classical correlation over projective measurements on `side`.

    The best point of the coarse grid is refined by a four-point pattern search in
    (θ, φ); the step shrinks by `cfg.shrink` whenever no neighbour improves.

    Returns:
        MeasurementResult: classical correlation in bits, the optimal setting and the
            spread of the objective over the final stencil.
    """

    objective = ConditionalEntropy(rho, side)
    kept = "A" if side == "B" else "B"
    reduced_entropy = von_neumann_entropy(partial_trace(rho, kept))

    theta, phi = angle_grid(cfg.n_theta, cfg.n_phi)
    values = objective(bloch_directions(theta, phi))
    best = int(np.argmin(values))
    best_theta, best_phi, best_value = theta[best], phi[best], values[best]

    step_theta = np.pi / cfg.n_theta
    step_phi = 2.0 * np.pi / cfg.n_phi
    stencil = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    gap = math.inf
    for iteration in range(cfg.iterations):
        cand_theta, cand_phi = _normalize_angles(
            best_theta + stencil[:, 0] * step_theta, best_phi + stencil[:, 1] * step_phi
        )
        cand_values = objective(bloch_directions(cand_theta, cand_phi))
        gap = float(np.max(np.abs(cand_values - best_value)))
        winner = int(np.argmin(cand_values))
        if cand_values[winner] < best_value:
            best_theta, best_phi = cand_theta[winner], cand_phi[winner]
            best_value = cand_values[winner]
        else:
            step_theta *= cfg.shrink
            step_phi *= cfg.shrink
        logger.debug(
            "Pattern search %d on %s: S_cond = %.12g, steps (%.3g, %.3g).",
            iteration,
            side,
            best_value,
            step_theta,
            step_phi,
        )

    if gap > OPTIMIZER_GAP_TARGET:
        logger.warning(
            "Measurement search on %s stopped with a stencil spread of %.3e bits (target %.0e); "
            + "raise `optimizer_iterations`.",
            side,
            gap,
            OPTIMIZER_GAP_TARGET,
        )
    return MeasurementResult(
        classical_correlation=reduced_entropy - float(best_value),
        setting=MeasurementSetting(float(best_theta), float(best_phi)),
        gap=gap,
    )


def classical_correlation(
    rho: MatrixLike, side: str, cfg: OptimizerConfig = OptimizerConfig()
) -> Tuple[float, MeasurementSetting]:
    """CC_side = S(unmeasured qubit) - min conditional entropy, in bits."""

    result = optimize_measurement(rho, side, cfg)
    return result.classical_correlation, result.setting


def _discord_from(mutual: float, classical: float, side: str) -> float:
    value = mutual - classical
    if value < 0.0:
        if value < -DISCORD_CLAMP:
            logger.warning("Discord on %s came out negative (%.3e); not clamped.", side, value)
            return value
        return 0.0
    return value


def discord(rho: MatrixLike, side: str, cfg: OptimizerConfig = OptimizerConfig()) -> float:
    """D_side = I(ρ) - CC_side(ρ); side "B" is the discord with qubit B measured."""

    classical, _ = classical_correlation(rho, side, cfg)
    return _discord_from(mutual_information(rho), classical, side)


def report(rho: MatrixLike, cfg: OptimizerConfig = OptimizerConfig()) -> CorrelationReport:
    """Every measure of one state, for one output row."""

    mutual = mutual_information(rho)
    on_a = optimize_measurement(rho, "A", cfg)
    on_b = optimize_measurement(rho, "B", cfg)
    return CorrelationReport(
        concurrence=concurrence(rho),
        mutual_info=mutual,
        classical_corr_A=on_a.classical_correlation,
        classical_corr_B=on_b.classical_correlation,
        discord_A=_discord_from(mutual, on_a.classical_correlation, "A"),
        discord_B=_discord_from(mutual, on_b.classical_correlation, "B"),
        optimal_angles_A=(on_a.setting.theta, on_a.setting.phi),
        optimal_angles_B=(on_b.setting.theta, on_b.setting.phi),
        optimizer_gap=max(on_a.gap, on_b.gap),
    )
