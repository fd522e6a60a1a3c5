"""Exception types shared across the package."""


class MagnonMemoryError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MagnonMemoryError, ValueError):
    """An argument, parameter set, or configuration value is invalid."""


class RegimeError(MagnonMemoryError):
    """The request falls outside the physical regime an operation supports."""


class SingularModeError(RegimeError):
    """A magnon frequency vanishes where a formula divides by it."""

    def __init__(self, k: int, message: str | None = None):
        self.k = k
        super().__init__(message or f"magnon mode k={k} has zero frequency")


class ResourceLimitError(MagnonMemoryError):
    """A Hilbert-space dimension exceeds the configured cap."""
