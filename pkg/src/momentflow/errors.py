"""Exception types shared across the package."""


class MomentflowError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(MomentflowError):
    """An input file or mapping does not match the expected schema."""


class InvariantError(MomentflowError):
    """A structural invariant or operation precondition is violated."""


class NotSemisimpleError(InvariantError):
    """The Killing form is degenerate where a semisimple algebra is required."""


class StagnationError(MomentflowError):
    """The gradient flow step size underflowed without finding a decrease.

    The partial trace accumulated up to the stagnation point is attached as
    ``trace`` so callers can still inspect or serialize it.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
