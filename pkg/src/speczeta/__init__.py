"""Zeta functions of Laplacian spectra: graphs, lattices, trees, the circle and p-adic spaces."""
from .errors import ConvergenceError, DomainError, PoleError, StripError, ZetaError
from .mellin import QuadratureSpec, mellin_zeta
from .zetas import ZetaSpace, evaluate

__all__ = [
    "ZetaError",
    "PoleError",
    "DomainError",
    "StripError",
    "ConvergenceError",
    "QuadratureSpec",
    "mellin_zeta",
    "ZetaSpace",
    "evaluate",
]
__version__ = "0.1.0"
