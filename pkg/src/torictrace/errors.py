"""Exception hierarchy shared by all torictrace modules."""


class TorictraceError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TorictraceError):
    """Malformed input: cycles, duplicate labels, bad file syntax, invalid vectors."""


class DomainError(TorictraceError):
    """A precondition of an operation is violated (e.g. a < 4, nonnegative a-invariant)."""


class ResourceError(TorictraceError):
    """An enumeration cap was exceeded.  Refuses rather than silently truncating."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class VerificationError(TorictraceError):
    """An internal cross-check between two independent computations disagreed."""
