"""Exception hierarchy shared across the toolkit.

Each CLI error class maps to a distinct process exit code (see cli.py).
"""


class CassikitError(Exception):
    """Base class for all toolkit errors."""


class SizeError(CassikitError):
    """Array length or shape does not match the declared dimensions."""


class ValidationError(CassikitError):
    """Values violate an invariant (non-finite entries, non-binary mask, ...)."""


class DomainError(CassikitError):
    """A parameter is outside its admissible range."""


class ConfigError(CassikitError):
    """Inconsistent CLI configuration detected before any compute."""


class DivergenceError(CassikitError):
    """The AMP run produced non-finite or exploding noise estimates."""

    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"solver diverged at iteration {iteration}")


class FileFormatError(CassikitError):
    """Base class for binary file parsing failures."""


class BadMagicError(FileFormatError):
    """File does not start with the expected magic bytes."""


class TruncatedFileError(FileFormatError):
    """File is shorter than its header promises."""


class InvalidFieldError(FileFormatError):
    """A header field or payload byte violates the format invariants."""
