"""Exception types shared across the package.

Everything raised on purpose derives from DiniKitError so callers (and the
command line front end) can distinguish usage problems from genuine bugs.
"""


class DiniKitError(Exception):
    """Base class for all errors raised by dini_kit."""


class DomainError(DiniKitError, ValueError):
    """An argument lies outside the validated domain (order, argument, kind)."""


class RangeError(DiniKitError, OverflowError):
    """A requested value would overflow the double range or a hard cap."""


class ConvergenceError(DiniKitError, ArithmeticError):
    """A series failed to meet the requested tolerance within the term budget."""


class ToleranceError(DiniKitError, ArithmeticError):
    """An expansion cannot certify the requested tolerance within its growth cap."""


class ConsistencyError(DiniKitError, RuntimeError):
    """An internal cross-check failed (bracket signs, ordering, residuals)."""
