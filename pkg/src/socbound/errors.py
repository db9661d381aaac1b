"""Exception hierarchy shared by all modules."""


class SocBoundError(Exception):
    """Base class for library errors."""


class DomainError(SocBoundError, ValueError):
    """An argument lies outside the domain of the operation."""


class BranchPointError(DomainError):
    """The two momenta coincide (z at the branch point lambda_0)."""


class DegenerateCubicError(DomainError):
    """Leading coefficient of a cubic is (numerically) zero."""


class PoleError(SocBoundError, ArithmeticError):
    """A kernel was evaluated too close to one of its poles."""


class ConvergenceError(SocBoundError, RuntimeError):
    """An iterative solver failed to meet its tolerance."""


class InconsistencyError(SocBoundError, RuntimeError):
    """Two independent routes to the same quantity disagree."""


class NoSuchStateError(SocBoundError, LookupError):
    """A requested eigenstate does not exist at the given parameters."""
