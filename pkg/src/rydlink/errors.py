"""Exception taxonomy.

Each class maps to one CLI exit code (see cli.EXIT_CODES): invalid inputs
and config problems are distinguished from numerical failures so scripted
callers can tell a bad file from a singular operating point.
"""


class RydlinkError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(RydlinkError, ValueError):
    """An argument violates a documented precondition."""


class ConfigError(RydlinkError, ValueError):
    """Config file cannot be parsed or fails validation.

    The message carries the offending field path (e.g. "decays.gamma2").
    """


class NumericalError(RydlinkError, ArithmeticError):
    """Base for failures of the numerical machinery itself."""


class SingularSystemError(NumericalError):
    """A linear system has no unique solution.

    Raised by the steady-state solve when no decay channel pins a unique
    fixed point, and by the weak-probe formulas when a denominator
    underflows the documented floor.
    """


class StepTooLargeError(NumericalError):
    """Time integration step violates the stability bound or diverged."""


class NoSplittingError(NumericalError):
    """A transmission trace lacks the requested interior feature."""


class InvalidCoherenceError(NumericalError):
    """A coherence lies outside the absorptive-medium model domain."""


class DemodulationInfeasibleError(NumericalError):
    """Reference transmission levels are not strictly monotone."""
