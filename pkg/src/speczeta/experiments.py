"""Asymptotic and arithmetic experiments on cycle graphs, tori and trees.

Each experiment returns plain records so the CLI (or a notebook) can tabulate
them; pass/fail judgements are left to the caller except where an exact
integer is expected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .mellin import zeta_prime_at_zero
from .specialfn import DirichletCharacter, riemann_zeta
from .spectra import (
    FiniteGraphSpectrum,
    complete_graph_spectrum,
    cycle_spectrum,
    dense_laplacian_eigenvalues,
    laplacian_from_edges,
    path_spectrum,
)
from .zetas import completed_cyclic_L, zeta_circle, zeta_cycle, zeta_Z

__all__ = [
    "ConvergenceRecord",
    "VerlindeResult",
    "CatalanRow",
    "verlinde_dimension",
    "cycle_to_Z_limit",
    "cycle_secondary_probe",
    "euler_value_recovery",
    "euler_closed_form",
    "rh_ratio_experiment",
    "spanning_trees",
    "cofactor_spanning_trees",
    "catalan_constant",
    "torus2d_logdet",
    "torus2d_logdet_limit",
    "catalan_table",
    # re-exported spectrum builders
    "FiniteGraphSpectrum",
    "cycle_spectrum",
    "complete_graph_spectrum",
    "path_spectrum",
    "dense_laplacian_eigenvalues",
    "laplacian_from_edges",
]

# first ten digits, used only to guard the computed constant against typos
_CATALAN_G_10 = 0.9159655942
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class ConvergenceRecord:
    n: int
    value: complex
    target: complex
    abs_error: float


def _record(n: int, value: complex, target: complex) -> ConvergenceRecord:
    return ConvergenceRecord(n, complex(value), complex(target), abs(complex(value) - complex(target)))


@dataclass(frozen=True)
class VerlindeResult:
    g: int
    m: int
    value: float
    nearest: int
    distance: float

    @property
    def is_integer(self) -> bool:
        return self.distance < 1e-6


def verlinde_dimension(g: int, m: int) -> VerlindeResult:
    """``(m+2)^{g-1} 2^{g-1} zeta_{Z/(m+2)Z}(g-1)``, the rank-2 Verlinde number."""
    if g < 2 or m < 1:
        raise DomainError("Verlinde formula needs g >= 2 and m >= 1")
    value = (m + 2) ** (g - 1) * 2 ** (g - 1) * zeta_cycle(m + 2, g - 1).real
    nearest = round(value)
    return VerlindeResult(g, m, value, nearest, abs(value - nearest))


def cycle_to_Z_limit(s: complex, n_schedule: Iterable[int]) -> list[ConvergenceRecord]:
    """``zeta_{Z/nZ}(s) / n`` against ``zeta_Z(s)`` for ``0 < Re s < 1/2``."""
    s = complex(s)
    if not 0.0 < s.real < 0.5:
        raise DomainError("cycle_to_Z_limit needs 0 < Re s < 1/2")
    target = zeta_Z(s)
    return [_record(n, zeta_cycle(n, s) / n, target) for n in sorted(n_schedule)]


def cycle_secondary_probe(s: complex, n_schedule: Iterable[int]) -> list[ConvergenceRecord]:
    """Hypothesis probe: ``(zeta_{Z/nZ}(s) - n zeta_Z(s)) / n^{2s}`` against ``zeta_circle(s)``.

    Reported for inspection only; nothing asserts that it converges.
    """
    s = complex(s)
    bulk = zeta_Z(s)
    target = zeta_circle(s)
    out = []
    for n in sorted(n_schedule):
        out.append(_record(n, (zeta_cycle(n, s) - n * bulk) / n ** (2.0 * s), target))
    return out


def euler_closed_form(m: int, n: int) -> Fraction:
    """Exact ``zeta_{Z/nZ}(m) / n^{2m}`` for m = 1, 2 (cosecant power sums)."""
    if m == 1:
        return Fraction(n * n - 1, 12 * n * n)
    if m == 2:
        return Fraction((n * n - 1) * (n * n + 11), 720 * n**4)
    raise DomainError("closed forms are tabulated for m = 1, 2 only")


def euler_value_recovery(m: int, n_schedule: Iterable[int]) -> list[ConvergenceRecord]:
    """``zeta_{Z/nZ}(m) / n^{2m}`` against ``2 (2 pi)^{-2m} zeta(2m)``."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    target = 2.0 * (2.0 * math.pi) ** (-2 * m) * riemann_zeta(2 * m).real
    return [_record(n, zeta_cycle(n, m).real / float(n) ** (2 * m), target) for n in sorted(n_schedule)]


def rh_ratio_experiment(
    chi: DirichletCharacter,
    s: complex,
    n_schedule: Iterable[int],
    allow_outside: bool = False,
) -> list[ConvergenceRecord]:
    """``|Lambda_n(s, chi)| / |Lambda_n(1-s, conj chi)|`` against 1.

    The character must be even and primitive with modulus >= 3, and ``s`` in
    the critical strip with ``Im s >= 8`` unless ``allow_outside`` is set.
    """
    s = complex(s)
    if chi.modulus < 3 or not chi.even or not chi.primitive:
        raise DomainError("rh_ratio_experiment needs an even primitive character of modulus >= 3")
    if not allow_outside and not (0.0 < s.real < 1.0 and s.imag >= 8.0):
        raise DomainError("s must satisfy 0 < Re s < 1 and Im s >= 8 (pass allow_outside to override)")
    chi_bar = chi.conjugate()
    out = []
    for n in sorted(n_schedule):
        ratio = abs(completed_cyclic_L(n, s, chi)) / abs(completed_cyclic_L(n, 1.0 - s, chi_bar))
        out.append(_record(n, ratio, 1.0))
    return out


def spanning_trees(spectrum: FiniteGraphSpectrum) -> int:
    """Matrix-tree count ``det'(Delta) / N`` with ``det' = exp(-zeta'(0))``.

    Raises
    ------
    DomainError
        If the graph is disconnected.
    ConvergenceError
        If the result is too far from an integer to trust the eigenvalues.
    """
    nonzero = spectrum.nonzero()
    if spectrum.vertex_count - len(nonzero) != 1:
        raise DomainError("spanning_trees needs a connected graph (exactly one zero eigenvalue)")
    if not nonzero:
        return 1
    value = math.exp(-zeta_prime_at_zero(nonzero)) / spectrum.vertex_count
    count = round(value)
    if abs(value - count) >= 1e-6 * max(count, 1):
        raise ConvergenceError(f"tree count {value!r} is not within rounding of an integer")
    return count


def cofactor_spanning_trees(laplacian: Sequence[Sequence[int]]) -> int:
    """Exact matrix-tree count: determinant of the Laplacian with row/column 0 removed."""
    n = len(laplacian)
    if n == 1:
        return 1
    mat = [[Fraction(laplacian[i][j]) for j in range(1, n)] for i in range(1, n)]
    size = n - 1
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if mat[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        for r in range(col + 1, size):
            factor = mat[r][col] / mat[col][col]
            if factor:
                for c in range(col, size):
                    mat[r][c] -= factor * mat[col][c]
    assert det.denominator == 1
    return int(det)


def catalan_constant() -> float:
    """Catalan's constant G from the accelerated series
    ``G = (pi/8) log(2 + sqrt 3) + (3/8) sum_k 1 / ((2k+1)^2 binom(2k, k))``.

    The sum converges like ``4^{-k}``; the result is checked against the
    first ten published digits.
    """
    total = 0.0
    k = 0
    inv_binom = 1.0
    while True:
        term = inv_binom / (2 * k + 1) ** 2
        total += term
        if term < 1e-18:
            break
        k += 1
        # 1/binom(2k, k) from 1/binom(2k-2, k-1)
        inv_binom *= k / (2.0 * (2 * k - 1))
    value = math.pi / 8.0 * math.log(2.0 + math.sqrt(3.0)) + 3.0 / 8.0 * total
    if abs(value - _CATALAN_G_10) > 1e-10:
        raise AssertionError("Catalan constant series disagrees with its known digits")
    return value


def torus2d_logdet(n: int) -> float:
    """``(1/n^2) sum' log(4 - 2 cos(2 pi j/n) - 2 cos(2 pi k/n))`` over the discrete torus."""
    if n < 4:
        raise DomainError("torus needs n >= 4")
    c = 2.0 - 2.0 * np.cos(2.0 * np.pi * np.arange(n) / n)
    lam = c[:, None] + c[None, :]
    lam[0, 0] = 1.0
    return float(np.log(lam).sum() / (n * n))


def torus2d_logdet_limit(n_schedule: Iterable[int]) -> list[ConvergenceRecord]:
    """Per-vertex log-determinant of the n x n torus against ``4G/pi``."""
    target = 4.0 * catalan_constant() / math.pi
    return [_record(n, torus2d_logdet(n), target) for n in sorted(n_schedule)]


@dataclass(frozen=True)
class CatalanRow:
    n: int
    zeta_value: int
    central_binomial: int
    catalan: int
    ok: bool


def catalan_table(n_max: int) -> list[CatalanRow]:
    """Rows ``(n, zeta_Z(-n), binom(2n, n), C_n)`` with the identities checked per row.

    A row passes when ``|zeta_Z(-n) - binom(2n, n)| <= max(1e-9, 8 ulp)``:
    the absolute bound governs for small n, and the ulp bound once the
    binomial outgrows double-precision integer resolution.
    """
    if not 0 <= n_max <= 30:
        raise DomainError("catalan_table supports 0 <= n_max <= 30")
    rows = []
    for n in range(n_max + 1):
        raw = zeta_Z(-n).real
        value = round(raw)
        central = comb(2 * n, n)
        cat = central // (n + 1)
        # rounding distance 1e-9 while that is above the ulp, a few ulps beyond
        matches = abs(raw - central) <= max(1e-9, 8.0 * _EPS * central)
        ok = matches and central == (n + 1) * cat
        rows.append(CatalanRow(n, value, central, cat, ok))
    return rows


def random_connected_graph(n: int, extra_edges: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """A random spanning tree on ``n`` vertices plus up to ``extra_edges`` further edges."""
    order = rng.permutation(n)
    edges = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        a, b = int(order[i]), int(order[j])
        edges.add((min(a, b), max(a, b)))
    for _ in range(extra_edges):
        a, b = (int(v) for v in rng.choice(n, size=2, replace=False))
        edges.add((min(a, b), max(a, b)))
    return sorted(edges)


def spectrum_of_edges(n: int, edges: Sequence[tuple[int, int]]) -> FiniteGraphSpectrum:
    return dense_laplacian_eigenvalues(laplacian_from_edges(n, edges))


def first_nonincreasing_violation(records: Sequence[ConvergenceRecord]) -> Optional[int]:
    """Index of the first record whose error exceeds its predecessor's, if any."""
    for i in range(1, len(records)):
        if records[i].abs_error > records[i - 1].abs_error:
            return i
    return None
