"""Error utilities for the pmcorr command line tool."""

from typing import Type

EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_VALIDATION = 4


class PmcorrError(RuntimeError):
    """Base class for every error the command line tool knows how to report."""

    exit_code = 1


class ConfigError(PmcorrError):
    """A scenario file or command line override could not be understood."""

    exit_code = EXIT_CONFIG


class ValidationFailure(PmcorrError):
    """A cross-check between independent computation paths exceeded its tolerance."""

    exit_code = EXIT_VALIDATION


class PhysicsDomainError(PmcorrError):
    """Parameters or states fall outside the domain where the solution is defined."""

    exit_code = EXIT_PHYSICS


class DegenerateSpectrum(PhysicsDomainError):
    """The system spectrum is degenerate (ξ = η, ξ = 0 or η = 0)."""


class InvalidAnisotropy(PhysicsDomainError):
    """The partial anisotropy lies outside [-1, 1]."""


class NoCriticalPoint(PhysicsDomainError):
    """No real spin-orbit strength makes the spectrum degenerate."""


class NonPositiveFrequency(PhysicsDomainError):
    """A Bose occupation was requested at a non-positive frequency."""


class ZeroFrequency(PhysicsDomainError):
    """A spectral density was requested at zero transition frequency."""


class NegativeCoefficient(PhysicsDomainError):
    """A transition probability |c|² came out negative."""


class RateDegeneracy(PhysicsDomainError):
    """The printed Jordan decomposition is singular for this rate set."""


class ZeroRates(PhysicsDomainError):
    """The rate set has no dissipation, so no unique steady state exists."""


class NotXShaped(PhysicsDomainError):
    """The initial state has weight outside the diagonal and anti-diagonal."""


class BasisMismatch(PhysicsDomainError):
    """A density matrix is tagged with the wrong basis for the operation."""


class NotDensityMatrix(PhysicsDomainError):
    """A matrix violates hermiticity, unit trace or positivity."""


class InvalidBathParams(PhysicsDomainError):
    """Temperatures, couplings or memory rate are out of range."""


class NonConvergence(PhysicsDomainError):
    """Step halving of the oracle integrator did not reach the tolerance."""


def raise_error(
    message: str,
    suggest_report: bool = True,
    postlude: str = "Please report this error by filing an issue with the pmcorr developers.",
    error: Type[Exception] = RuntimeError,
) -> None:
    """Raise an error and, by default, suggest the user report the issue.

    Args:
        message (str): message to be displayed to the user.
        suggest_report (bool, optional): whether to append `postlude`. Defaults to True.
        postlude (str, optional): message to be tacked onto the end (defaults to asking
            the user to report the issue).
        error (Type[Exception], optional): exception class to raise. Defaults to RuntimeError.
    """
    msg = message
    if suggest_report:
        msg = msg + " " + postlude
    raise error(msg)
