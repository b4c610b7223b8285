"""Exception types shared across the package.

The CLI maps these to exit codes: validation/hypothesis failures exit 1,
capacity errors exit 2.
"""


class CharsumError(Exception):
    """Base class for all charsum-specific errors."""


class CapacityError(CharsumError):
    """A size guard was exceeded (table memory, sieve range)."""


class RegimeError(CharsumError):
    """Smoothness parameters are degenerate (X >= Y without overrides)."""


class HypothesisError(CharsumError, ValueError):
    """A stated precondition of an evaluator does not hold for the inputs."""
