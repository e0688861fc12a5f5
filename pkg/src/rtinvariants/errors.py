"""Exception types shared by the library and the command line."""


class InvariantError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(InvariantError, ValueError):
    """Malformed or inconsistent input (bad type, non-coprime pair, ...)."""


class PreconditionError(InvariantError, ValueError):
    """Input is well formed but the requested evaluation does not apply."""


class CostGuardExceeded(InvariantError):
    """The estimated number of summands is above the configured limit."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate
