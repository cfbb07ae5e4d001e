"""Laplacian spectra of finite graphs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "FiniteGraphSpectrum",
    "cycle_spectrum",
    "complete_graph_spectrum",
    "path_spectrum",
    "dense_laplacian_eigenvalues",
    "laplacian_from_edges",
]

_MAX_DENSE = 200


@dataclass(frozen=True)
class FiniteGraphSpectrum:
    """Vertex count and ascending Laplacian eigenvalues of a finite graph."""

    vertex_count: int
    eigenvalues: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.eigenvalues) != self.vertex_count:
            raise DomainError("need exactly one eigenvalue per vertex")
        if list(self.eigenvalues) != sorted(self.eigenvalues):
            raise DomainError("eigenvalues must be sorted ascending")

    def nonzero(self, tol: float = 1e-9) -> tuple[float, ...]:
        """Eigenvalues above ``tol`` times the spectral radius."""
        cut = tol * max(1.0, self.eigenvalues[-1])
        return tuple(v for v in self.eigenvalues if v > cut)

    def components(self, tol: float = 1e-9) -> int:
        return self.vertex_count - len(self.nonzero(tol))


def cycle_spectrum(n: int) -> FiniteGraphSpectrum:
    """Cycle Z/nZ: ``4 sin^2(pi k / n)``, k = 0..n-1."""
    if n < 2:
        raise DomainError("a cycle needs n >= 2")
    vals = sorted(4.0 * math.sin(math.pi * k / n) ** 2 for k in range(n))
    vals[0] = 0.0
    return FiniteGraphSpectrum(n, tuple(vals))


def complete_graph_spectrum(n: int) -> FiniteGraphSpectrum:
    """K_n: 0 once and n with multiplicity n - 1."""
    if n < 1:
        raise DomainError("K_n needs n >= 1")
    return FiniteGraphSpectrum(n, (0.0,) + (float(n),) * (n - 1))


def path_spectrum(n: int) -> FiniteGraphSpectrum:
    """Path on n vertices: ``2 - 2 cos(pi k / n)``, k = 0..n-1."""
    if n < 1:
        raise DomainError("a path needs n >= 1")
    vals = sorted(4.0 * math.sin(math.pi * k / (2 * n)) ** 2 for k in range(n))
    return FiniteGraphSpectrum(n, tuple(vals))


def laplacian_from_edges(n: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    """Integer Laplacian matrix of a simple graph on vertices ``0..n-1``."""
    lap = [[0] * n for _ in range(n)]
    for a, b in edges:
        if a == b:
            raise DomainError("self-loops are not allowed")
        lap[a][b] -= 1
        lap[b][a] -= 1
        lap[a][a] += 1
        lap[b][b] += 1
    return lap


def dense_laplacian_eigenvalues(matrix: Sequence[Sequence[float]]) -> FiniteGraphSpectrum:
    """Spectrum of a user-supplied Laplacian (symmetric, zero row sums, N <= 200)."""
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DomainError("Laplacian must be a square matrix")
    n = mat.shape[0]
    if n > _MAX_DENSE:
        raise DomainError(f"dense route is capped at N = {_MAX_DENSE}")
    scale = max(1.0, float(np.abs(mat).max()))
    if not np.allclose(mat, mat.T, rtol=0.0, atol=1e-12 * scale):
        raise DomainError("Laplacian must be symmetric")
    if np.abs(mat.sum(axis=1)).max() > 1e-9 * scale:
        raise DomainError("Laplacian rows must sum to zero")
    vals = np.linalg.eigvalsh(mat)
    # the all-ones vector is an exact null vector; clean rounding around it
    vals[np.abs(vals) < 1e-10 * scale * n] = 0.0
    return FiniteGraphSpectrum(n, tuple(float(v) for v in np.sort(vals)))
