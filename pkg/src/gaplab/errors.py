"""Shared exception types."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance.

    Carries the last residual seen so callers can log attrition.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
