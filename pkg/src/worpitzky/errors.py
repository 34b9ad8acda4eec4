"""Exception types shared across the package."""


class WorpitzkyError(Exception):
    """Base class for errors raised by this package."""


class InvalidRootSystem(WorpitzkyError, ValueError):
    """Raised for a (family, rank) pair that is not an irreducible type."""


class InvalidSubset(WorpitzkyError, ValueError):
    """Raised when a subset contains something other than positive roots."""


class GuardExceeded(WorpitzkyError):
    """Raised when an enumeration exceeds its configured size guard."""


class InvariantViolation(WorpitzkyError, AssertionError):
    """Raised when an internal cross-check fails.

    These indicate a bug (or a false claim being tested), never bad input.
    """


class FitError(WorpitzkyError):
    """Raised when exact counts cannot be fitted by a quasi-polynomial."""
