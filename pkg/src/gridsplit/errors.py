"""Exception hierarchy shared by all gridsplit modules.

Two failure families matter to callers: data that violates the case or
graph contracts (ValidationError, CLI exit code 2) and numerics that fail
to converge or produce a singular system (NumericalError, CLI exit code 3).
"""

from __future__ import annotations


class GridsplitError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GridsplitError):
    """Input data violates a structural contract.

    Carries a list of human-readable findings so callers can report every
    problem at once instead of the first one hit.
    """

    def __init__(self, message: str, findings: list[str] | None = None):
        super().__init__(message)
        self.findings = list(findings) if findings else [message]


class NumericalError(GridsplitError):
    """A numerical procedure failed (divergence, singularity, no convergence)."""

    def __init__(self, message: str, residual: float | None = None, iteration: int | None = None):
        super().__init__(message)
        self.residual = residual
        self.iteration = iteration
