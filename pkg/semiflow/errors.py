"""
Exception hierarchy for semiflow.

Every error carries an optional offending point and a process exit code, so
the command layer can report failures without inspecting exception types.
"""

import logging
from typing import Optional

logger = logging.getLogger(__name__)


class SemiflowError(Exception):
    """Base exception for all semiflow errors."""

    exit_code: int = 2

    def __init__(self, message: str, point: Optional[complex] = None):
        """
        Initialize error.

        Args:
            message: Error description
            point: Offending point of the complex plane (optional)
        """
        logger.debug("SemiflowError.__init__() entry/exit")
        super().__init__(message)
        self.point = point


class DomainViolation(SemiflowError, ValueError):
    """A point lies outside the open domain an operation requires."""


class BranchCutError(DomainViolation):
    """A square root was requested on the negative real axis."""


class DivergenceRegion(DomainViolation):
    """A Dirichlet series was evaluated at or left of its abscissa."""


class FlowError(SemiflowError):
    """Numerical integration of a semigroup flow failed."""


class StepLimitExceeded(FlowError):
    """The integrator used up its step budget before reaching the horizon."""


class DomainExit(FlowError):
    """The integrator could not keep a trajectory inside its domain."""


class GeometryError(SemiflowError, ValueError):
    """Malformed polyline or Jordan domain, or an envelope leaving its square."""


class UnknownGeneratorError(SemiflowError, KeyError):
    """A catalog or closed-form identifier does not resolve."""

    exit_code = 3

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class UsageError(SemiflowError):
    """Bad command-line arguments."""

    exit_code = 64


class ConfigError(UsageError):
    """Invalid experiment configuration."""


class PreconditionError(UsageError):
    """An experiment's stated preconditions do not hold for its inputs."""


class SuiteFailure(SemiflowError):
    """A verification suite finished with failing checks."""

    exit_code = 1

    def __init__(self, message: str, failed_checks: Optional[list] = None):
        super().__init__(message)
        self.failed_checks = list(failed_checks or [])


__all__ = [
    "SemiflowError",
    "DomainViolation",
    "BranchCutError",
    "DivergenceRegion",
    "FlowError",
    "StepLimitExceeded",
    "DomainExit",
    "GeometryError",
    "UnknownGeneratorError",
    "UsageError",
    "ConfigError",
    "PreconditionError",
    "SuiteFailure",
]
