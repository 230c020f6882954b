"""
Error hierarchy shared by the billiard engines and the CLI.

The CLI maps these onto exit codes (see ``cli.billiards.EXIT_CODES``).
"""

from typing import Optional


class BilliardError(Exception):
    """Base class for every error raised by the package."""


class DomainError(BilliardError, ValueError):
    """A numeric argument lies outside the domain of an operation."""


class ContractViolation(BilliardError):
    """Inputs are individually valid but inconsistent with each other."""


class DegenerateOrbitError(BilliardError):
    """A trajectory is tangent to the boundary or passes through a focus."""


class FamilyNotFoundError(BilliardError):
    """No periodic-orbit family with the requested winding exists.

    ``out_of_range`` marks a winding no caustic of the billiard can realise,
    as opposed to a family that was bracketed but failed to close.
    """

    def __init__(self, message: str, out_of_range: bool = False):
        super().__init__(message)
        self.out_of_range = out_of_range


class ConvergenceError(BilliardError):
    """An iterative numerical step failed to reach its tolerance."""


class InsufficientLevelsError(BilliardError):
    """A statistic needs more converged levels than a spectrum provides."""

    def __init__(self, message: str, sample_id: Optional[int] = None):
        super().__init__(message)
        self.sample_id = sample_id


class InvariantFailure(BilliardError):
    """A classical or spectral invariant check did not hold."""


class ConfigError(BilliardError):
    """A configuration file or engine setting is unusable."""
