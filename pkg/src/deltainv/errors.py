"""Exception hierarchy shared across the package."""


class DeltaInvError(Exception):
    """Base class for all errors raised by deltainv."""


class InputError(DeltaInvError, ValueError):
    """Malformed or out-of-contract input (CLI exit code 1)."""


class DimensionMismatchError(InputError):
    pass


class NotInAmbientError(InputError):
    """An exponential polynomial has a term outside the ambient space."""

    def __init__(self, message, lam=None, degree=None):
        super().__init__(message)
        self.lam = lam
        self.degree = degree


class ExpOverflowError(DeltaInvError, OverflowError):
    def __init__(self, message, lam=None, t=None):
        super().__init__(message)
        self.lam = lam
        self.t = t


class HypothesisError(InputError):
    """A required hypothesis does not hold for the supplied data."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegenerateStepError(InputError):
    """A step h makes two root subspaces share an eigenvalue."""


class ChainPreconditionError(InputError):
    pass


class SingularCollocationError(InputError):
    pass


class ConvergenceError(DeltaInvError):
    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table


class EigenvalueError(ConvergenceError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TheoremViolation(DeltaInvError):
    """A computed result contradicts a proved statement (CLI exit code 2).

    Seeing this means the implementation, not the mathematics, is wrong.
    """
