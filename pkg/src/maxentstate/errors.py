"""Exception hierarchy shared by every module."""


class MaxEntError(Exception):
    """Base class for errors raised by :mod:`maxentstate`."""


class InvalidInputError(MaxEntError, ValueError):
    """An observable, state or configuration failed validation."""


class DimensionError(InvalidInputError):
    """Two vectors that must have equal length do not."""


class DomainError(MaxEntError, ValueError):
    """A partial map was applied outside its domain."""


class NoSolutionError(MaxEntError):
    """The target mean lies outside ``[a_1, a_n]``; no state has that mean."""


class NonConvergenceError(MaxEntError):
    """An iteration exhausted its budget (or diverged) before meeting tolerance.

    The partial trace, when one was recorded, is attached as ``trace``.
    """

    def __init__(self, message, trace=None, last=None):
        super().__init__(message)
        self.trace = trace
        self.last = last


class SizeError(MaxEntError, ValueError):
    """The input is too large for an exponential-time procedure."""


class OracleError(MaxEntError):
    """A reference computation could not produce an answer."""
