"""Exception types raised by the package."""


class ParameterError(ValueError):
    """A model or experiment parameter violates its domain."""


class ConvergenceError(RuntimeError):
    """An iteration failed to settle within its budget.

    The last iterate is kept on ``last`` so callers can inspect it.
    """

    def __init__(self, message, last=None, iterations=None):
        super().__init__(message)
        self.last = last
        self.iterations = iterations


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""
