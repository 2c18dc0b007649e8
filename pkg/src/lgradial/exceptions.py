from __future__ import annotations

from rich.console import RenderableType

__all__ = (
    "RadialWarning",
    "AsymptoticRegimeWarning",
    "RadialError",
    "DomainError",
    "UnknownOperatorError",
    "IrrepMismatchError",
    "GridError",
    "NonFactorizedFieldError",
    "TruncationError",
    "KernelError",
    "ConfigurationError",
)


class RadialWarning(UserWarning):
    """Base class for all warnings in lgradial"""

    ...


class AsymptoticRegimeWarning(RadialWarning):
    """An asymptotic formula was evaluated outside the regime it describes."""

    ...


class RadialError(Exception):
    """Base class for exceptions in lgradial"""

    def __init__(
        self,
        *args: object,
        hint: RenderableType | None = None,
    ) -> None:
        self.hint = hint
        super().__init__(*args)


class DomainError(RadialError, ValueError):
    """A precondition on the arguments was violated."""


class UnknownOperatorError(DomainError):
    """The operator tag is not one of the known operators."""


class IrrepMismatchError(DomainError):
    """Two objects live on different irreps or truncations."""


class GridError(DomainError):
    """Something is wrong with a sampling grid."""


class NonFactorizedFieldError(GridError):
    """The field is not of the form R(r) e^{i ell phi}."""


class TruncationError(RadialError):
    """The truncated basis is too small for the requested accuracy."""


class KernelError(RadialError):
    """A special-function kernel failed its own consistency check."""


class ConfigurationError(RadialError):
    """Something is wrong with the configuration."""
