import numpy as np
import pytest

from pmcorr.core.dissipator import BathParams, RateSet
from pmcorr.core.model import DensityMatrix, SystemParams

BELL_PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0])


@pytest.fixture
def fig1_system() -> SystemParams:
    return SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0, D=1.0)


@pytest.fixture
def fig1_baths() -> BathParams:
    return BathParams(T1=1.25, T2=0.75, gamma1=0.05, gamma2=0.05, gamma0=10.0)


@pytest.fixture
def bell() -> DensityMatrix:
    return DensityMatrix.from_pure(BELL_PSI_PLUS)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_rates(rng: np.random.Generator) -> RateSet:
    """Rates in [0.1, 1] with X₁ and Y₂ kept apart."""

    while True:
        a, a_, y, y_ = rng.uniform(0.1, 1.0, size=4)
        if abs((a + a_) - (y + y_)) > 0.05:
            return RateSet(X1p=a, X1m=a_, Y2p=y, Y2m=y_, xi=2.0, eta=1.0)


def random_system(rng: np.random.Generator) -> SystemParams:
    """Signed parameters in [-3, 3] with ξ, η and |ξ - η| all above 0.1."""

    while True:
        J, B, b, D = rng.uniform(-3.0, 3.0, size=4)
        chi = rng.uniform(-1.0, 1.0)
        p = SystemParams(J=J, chi=chi, B=B, b=b, D=D)
        if min(p.xi, p.eta, abs(p.xi - p.eta)) > 0.1:
            return p


def random_x_state(rng: np.random.Generator, phases: bool = True) -> DensityMatrix:
    """A random valid X state; coherences stay within 0.9 of the positivity bound."""

    diagonal = rng.dirichlet(np.ones(4))
    r14 = 0.9 * rng.uniform() * np.sqrt(diagonal[0] * diagonal[3])
    r23 = 0.9 * rng.uniform() * np.sqrt(diagonal[1] * diagonal[2])
    if phases:
        rho14 = r14 * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        rho23 = r23 * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    else:
        rho14 = r14 * rng.choice([-1.0, 1.0])
        rho23 = r23 * rng.choice([-1.0, 1.0])
    elements = np.diag(diagonal).astype(complex)
    elements[0, 3], elements[3, 0] = rho14, np.conj(rho14)
    elements[1, 2], elements[2, 1] = rho23, np.conj(rho23)
    return DensityMatrix(elements)
