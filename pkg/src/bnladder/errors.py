"""Exception hierarchy for bnladder.

Everything raised on purpose derives from :class:`BNLadderError` so callers
(and the command line driver) can tell our failures apart from genuine bugs.
"""

__all__ = [
    "BNLadderError",
    "ParameterError",
    "ConvergenceError",
    "ZetaRangeError",
    "DegenerateFitError",
]


class BNLadderError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(BNLadderError):
    """Raised when an argument is outside its documented domain.

    Examples: a profile parameter outside (0, 1], a negative smoothing
    width, a ladder index that does not fit in its window.
    """


class ConvergenceError(BNLadderError):
    """Raised when a computation cannot reach the requested accuracy
    within its configured budget (subdivision cap, iteration cap)."""


class ZetaRangeError(ParameterError):
    """Raised when a zeta evaluation is requested beyond the height up to
    which the implementation is accuracy-checked."""


class DegenerateFitError(BNLadderError):
    """Raised when a least-squares decay fit has too few usable shells to
    determine an exponent."""
