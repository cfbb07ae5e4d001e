"""Exception hierarchy shared by all modules."""


class ZetaError(ValueError):
    """Base class for math-domain failures raised by this package."""


class PoleError(ZetaError):
    """Evaluation requested at a pole."""


class DomainError(ZetaError):
    """An argument lies outside the documented domain."""


class StripError(DomainError):
    """A Mellin integral was requested outside its strip of convergence."""


class ConvergenceError(ZetaError):
    """Quadrature or series failed to reach the requested accuracy."""
