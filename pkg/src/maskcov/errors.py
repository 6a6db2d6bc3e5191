"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: rejected input -> 1, numerical
failure -> 2, failed bound/lemma assertion -> 3.
"""


class MaskcovError(Exception):
    """Base class for all package-specific errors."""


class InputError(MaskcovError):
    """An argument violates a documented precondition."""


class NotPSDError(InputError):
    """A matrix required to be positive semidefinite is not."""


class NumericalError(MaskcovError):
    """A numerical routine failed to converge or violated a sanity bound."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class CheckFailedError(MaskcovError):
    """A Monte Carlo bound or lemma assertion did not hold."""
