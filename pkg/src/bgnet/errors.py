"""Exception types shared across the package."""


class BgnetError(Exception):
    """Base class for package errors."""


class NotPositiveDefiniteError(BgnetError):
    """Cholesky factorization failed or produced a pivot at/below the floor."""


class NumericalDegeneracyError(BgnetError):
    """A Gibbs sweep hit a non-positive-definite conditional mid-update.

    Carries the sweep index and the column being updated when the
    factorization failed, so callers can report where a chain died.
    """

    def __init__(self, message, sweep=None, column=None):
        super().__init__(message)
        self.sweep = sweep
        self.column = column


class InputFormatError(BgnetError):
    """Malformed input file (bad CSV cell, wrong shape, unreadable header)."""
