"""Exception hierarchy shared by all modules."""


class VortexError(Exception):
    """Base class for every error raised by abelvortex."""


class InvalidInputError(VortexError, ValueError):
    pass


class UnboundedError(InvalidInputError):
    """Half-space system describes an unbounded region."""


class DegenerateError(InvalidInputError):
    """Half-space system is empty or not full-dimensional."""


class NotDelzantError(InvalidInputError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NoLiftError(VortexError):
    """Degree vector is not in the image of the facet matrix over the integers."""


class PreconditionError(VortexError):
    """An operation was called outside the regime where it is defined."""


class InfeasibleError(VortexError):
    """The averaged moment constant lies outside the open moment image."""

    def __init__(self, message, reason="infeasible"):
        super().__init__(message)
        self.reason = reason


class ConstraintError(InvalidInputError):
    """Source configuration violates a divisor disjointness constraint."""


class ConvergenceError(VortexError):
    def __init__(self, message, residual_history=()):
        super().__init__(message)
        self.residual_history = list(residual_history)
