"""Grid checks of functional equations and kernel identities.

Each check evaluates both sides of an identity on a grid and returns a
:class:`CheckReport` with the largest deviation and where it occurred. Checks
never stop at the first failure: the worst point is the useful diagnostic.

Functional equations of completed zetas grow like ``|Gamma|`` off the real
axis, so their reports gate on the deviation scaled by ``max(1, |lhs|, |rhs|)``;
``max_abs_deviation`` always holds the raw absolute deviation as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .heat import (
    PAdicAbs,
    circle_heat_kernel_periodized,
    circle_heat_kernel_spectral,
    heat_trace_circle,
    padic_heat_kernel_series,
    padic_heat_kernel_shell,
    padic_series_envelope,
)
from .mellin import QuadratureSpec, mellin_zeta
from .specialfn import is_prime
from .zetas import (
    ZetaSpace,
    xi_circle,
    xi_p,
    xi_Z,
    zeta_circle,
    zeta_tree,
    zeta_tree_spectral_measure,
    zeta_Z,
    zeta_Zd,
)

__all__ = [
    "CheckReport",
    "check_xi_Z",
    "check_xi_circle",
    "check_xi_p",
    "check_poisson_circle",
    "check_padic_kernels",
    "check_nilsson_identity",
    "check_strip_equivalence",
    "default_xi_Z_grid",
    "default_xi_circle_grid",
    "default_xi_p_grid",
    "default_poisson_grid",
    "default_padic_grid",
    "default_strip_grid",
    "POLE_RADIUS",
]

POLE_RADIUS = 1e-3
_SERIES_FLOOR = 1e-18


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one grid check.

    ``metric`` names the quantity compared against ``tolerance``: ``"abs"``
    for the raw deviation or ``"scaled"`` for ``|a-b| / max(1, |a|, |b|)``.
    ``worst_point`` is a tuple of grid coordinates and attains the gated
    deviation. ``skipped`` counts points excluded by a validity envelope.
    """

    identity_name: str
    grid_description: str
    points_checked: int
    max_abs_deviation: float
    worst_point: tuple
    tolerance: float
    passed: bool
    metric: str = "abs"
    max_scaled_deviation: float = 0.0
    skipped: int = 0
    notes: str = ""

    def as_dict(self) -> dict:
        return {
            "identity": self.identity_name,
            "grid": self.grid_description,
            "points_checked": self.points_checked,
            "skipped": self.skipped,
            "max_abs_deviation": self.max_abs_deviation,
            "max_scaled_deviation": self.max_scaled_deviation,
            "metric": self.metric,
            "worst_point": " ".join(_fmt_coord(c) for c in self.worst_point),
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _fmt_coord(c) -> str:
    if isinstance(c, complex):
        return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i"
    return repr(c)


def _key(point: tuple) -> tuple:
    # lexicographic order on real coordinates, complex split into (re, im)
    out = []
    for c in point:
        if isinstance(c, complex):
            out.extend((c.real, c.imag))
        else:
            out.append(float(c))
    return tuple(out)


@dataclass
class _Accumulator:
    metric: str = "abs"
    count: int = 0
    skipped: int = 0
    worst_gate: float = -1.0
    worst_abs: float = 0.0
    worst_scaled: float = 0.0
    max_abs: float = 0.0
    max_scaled: float = 0.0
    worst_point: Optional[tuple] = None

    def add(self, point: tuple, a: complex, b: complex) -> None:
        dev = abs(a - b)
        scaled = dev / max(1.0, abs(a), abs(b))
        gate = scaled if self.metric == "scaled" else dev
        self.count += 1
        self.max_abs = max(self.max_abs, dev)
        self.max_scaled = max(self.max_scaled, scaled)
        better = gate > self.worst_gate or (
            gate == self.worst_gate and _key(point) < _key(self.worst_point)
        )
        if better:
            self.worst_gate = gate
            self.worst_point = point

    def report(self, name: str, grid: str, tol: float) -> CheckReport:
        if self.count == 0:
            raise DomainError(f"{name}: no grid point could be checked")
        gate = self.max_scaled if self.metric == "scaled" else self.max_abs
        return CheckReport(
            identity_name=name,
            grid_description=grid,
            points_checked=self.count,
            max_abs_deviation=self.max_abs,
            worst_point=self.worst_point,
            tolerance=tol,
            passed=gate <= tol,
            metric=self.metric,
            max_scaled_deviation=self.max_scaled,
            skipped=self.skipped,
        )


def _symmetry_check(
    name: str,
    f: Callable[[complex], complex],
    grid: Iterable[complex],
    tol: float,
    description: Optional[str],
) -> CheckReport:
    pts = [complex(s) for s in grid]
    acc = _Accumulator(metric="scaled")
    for s in pts:
        acc.add((s,), f(s), f(1.0 - s))
    return acc.report(name, description or f"{len(pts)} points", tol)


# ----------------------------------------------------------------- default grids


def default_xi_Z_grid() -> list[complex]:
    """11 x 21 = 231 points: Re in [-2, 3] step 0.5, Im in [0, 10] step 0.5."""
    return [complex(-2.0 + 0.5 * i, 0.5 * j) for i in range(11) for j in range(21)]


def default_xi_circle_grid() -> list[complex]:
    """Re in [-1.5, 2.5] step 0.5 by Im in {0.5, 3, 6, 10}, plus the first zeta zero."""
    pts = [complex(-1.5 + 0.5 * i, im) for i in range(9) for im in (0.5, 3.0, 6.0, 10.0)]
    pts.append(complex(0.5, 14.134725))
    return pts


def _xi_p_poles(p: int, s: complex) -> float:
    # poles at s = 1/2 + i pi k / log p, k != 0
    step = math.pi / math.log(p)
    k = round(s.imag / step)
    if k == 0:
        k = 1 if s.imag >= 0 else -1
    return abs(s - complex(0.5, k * step))


def default_xi_p_grid(p: int, count: int = 50, seed: int = 0) -> list[complex]:
    """``count`` seeded uniform points in ``[-2, 3] x [-10, 10]`` at least ``POLE_RADIUS`` from poles."""
    rng = np.random.default_rng(seed)
    pts: list[complex] = []
    while len(pts) < count:
        s = complex(rng.uniform(-2.0, 3.0), rng.uniform(-10.0, 10.0))
        if _xi_p_poles(p, s) >= POLE_RADIUS:
            pts.append(s)
    return pts


def default_poisson_grid() -> tuple[list[float], list[float]]:
    """5 times by 9 positions: 45 points."""
    ts = [0.001, 0.01, 0.05, 0.2, 1.0]
    xs = [k / 8 for k in range(9)]
    return ts, xs


def default_padic_grid() -> tuple[tuple[int, ...], tuple[int, ...], tuple[float, ...]]:
    """Primes, valuations and times for the p-adic kernel comparison."""
    return (2, 3, 5), (-1, 0, 1, 2), (0.0001, 0.001, 0.01)


def default_strip_grid(space: ZetaSpace) -> list[complex]:
    """Points inside the convergence strip of the independent route of ``space``."""
    kind = space.kind
    if kind == "Z":
        return [complex(0.02 + 0.02 * i, im) for i in range(5) for im in (0.0, 0.7, 2.5, 6.0)][:20]
    if kind == "circle":
        return [complex(0.3), complex(0.7), complex(1.3, 2.0), complex(0.6, 5.0)]
    if kind == "Zd":
        return [complex(0.25), complex(0.5), complex(0.3, 1.0)]
    if kind == "tree":
        return [complex(0.5), complex(1.0), complex(2.0)]
    raise DomainError(f"no strip equivalence is defined for space {space}")


# ----------------------------------------------------------------- functional equations


def check_xi_Z(grid: Optional[Sequence[complex]] = None, tol: float = 1e-10) -> CheckReport:
    """``xi_Z(s) = xi_Z(1-s)`` over ``grid`` (default: :func:`default_xi_Z_grid`)."""
    if grid is None:
        grid = default_xi_Z_grid()
        desc = "Re [-2,3] step 0.5 x Im [0,10] step 0.5"
    else:
        desc = None
    return _symmetry_check("xi-z", xi_Z, grid, tol, desc)


def check_xi_circle(grid: Optional[Sequence[complex]] = None, tol: float = 1e-9) -> CheckReport:
    """``xi(s) = xi(1-s)`` for the completed circle zeta; the grid must avoid 0 and 1."""
    if grid is None:
        grid = default_xi_circle_grid()
        desc = "Re [-1.5,2.5] step 0.5 x Im {0.5,3,6,10} + 0.5+14.134725i"
    else:
        desc = None
    return _symmetry_check("xi-circle", xi_circle, grid, tol, desc)


def check_xi_p(p: int, grid: Optional[Sequence[complex]] = None, tol: float = 1e-12) -> CheckReport:
    """``xi_p(s) = xi_p(1-s)``; default grid is 50 seeded random points away from poles."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if grid is None:
        grid = default_xi_p_grid(p)
        desc = "50 seeded random points in [-2,3]x[-10,10], pole distance >= 1e-3"
    else:
        desc = None
    return _symmetry_check(f"xi-p(p={p})", lambda s: xi_p(p, s), grid, tol, desc)


# ----------------------------------------------------------------- kernels


def check_poisson_circle(
    t_list: Optional[Sequence[float]] = None,
    x_list: Optional[Sequence[float]] = None,
    tol: float = 1e-12,
) -> CheckReport:
    """Spectral vs periodized circle heat kernel over the product grid ``t x x``."""
    if t_list is None or x_list is None:
        dt, dx = default_poisson_grid()
        t_list = dt if t_list is None else t_list
        x_list = dx if x_list is None else x_list
    acc = _Accumulator()
    for t in t_list:
        if not t > 0:
            raise DomainError("heat kernel needs t > 0")
        for x in x_list:
            acc.add((float(t), float(x)), circle_heat_kernel_spectral(t, x), circle_heat_kernel_periodized(t, x))
    return acc.report("poisson", f"{len(t_list)} times x {len(x_list)} positions", tol)


def check_padic_kernels(
    primes: Optional[Sequence[int]] = None,
    valuations: Optional[Sequence[int]] = None,
    t_list: Optional[Sequence[float]] = None,
    tol: float = 1e-10,
) -> CheckReport:
    """Shell sum vs small-``t`` series of the p-adic heat kernel.

    Points with ``t p^2 / |x|_p^2 >= 1`` are outside the series envelope and
    are counted in ``skipped`` rather than failed.
    """
    dp, dv, dt = default_padic_grid()
    primes = dp if primes is None else tuple(primes)
    valuations = dv if valuations is None else tuple(valuations)
    t_list = dt if t_list is None else tuple(t_list)
    acc = _Accumulator()
    for p in primes:
        for v in valuations:
            x = PAdicAbs(p, v)
            for t in t_list:
                if padic_series_envelope(p, x, t) >= 1.0:
                    acc.skipped += 1
                    continue
                acc.add((p, v, float(t)), padic_heat_kernel_shell(p, x, t), padic_heat_kernel_series(p, x, t))
    desc = f"p in {list(primes)}, v in {list(valuations)}, t in {list(t_list)}"
    return acc.report("padic-kernels", desc, tol)


def nilsson_sides(p: int, v: int, s: float) -> tuple[float, float]:
    """Both sides of the Laplace-transform identity for the p-adic heat kernel at ``|x|_p = p^{-v}``.

    Left: ``(1/(s|x|)) sum_m (-1)^m (s|x|^2)^{-m} (1 - p^{2m}) / (1 - p^{-2m-1})``.
    Right: ``sum_{k >= -v} (p^2-1) p^k / ((1 + p^{2k} s)(p^2 + p^{2k} s))``.
    Both series are summed until terms drop below 1e-18 relative.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    xa = float(p) ** (-v)
    bound = (p / xa) ** 2
    if not s > bound:
        raise DomainError(f"identity needs s > (p/|x|_p)^2 = {bound:g}, got s = {s:g}")
    # left: geometric-like alternating series with ratio p^2/(s |x|^2) < 1
    u = 1.0 / (s * xa * xa)
    lhs_terms = []
    m = 1  # the m = 0 term vanishes
    while True:
        term = (-1) ** m * u**m * (1.0 - float(p) ** (2 * m)) / (1.0 - float(p) ** (-2 * m - 1))
        lhs_terms.append(term)
        if abs(term) < _SERIES_FLOOR * max(abs(math.fsum(lhs_terms)), 1e-300):
            break
        m += 1
        if m > 100000:
            raise ConvergenceError("left series did not converge")
    lhs = math.fsum(lhs_terms) / (s * xa)
    rhs_terms = []
    k = -v
    while True:
        q2 = float(p) ** (2 * k) * s
        term = (p * p - 1.0) * float(p) ** k / ((1.0 + q2) * (p * p + q2))
        rhs_terms.append(term)
        if term < _SERIES_FLOOR * math.fsum(rhs_terms):
            break
        k += 1
    return lhs, math.fsum(rhs_terms)


def check_nilsson_identity(p: int = 2, v: int = 0, s: float = 5.0, tol: float = 1e-10) -> CheckReport:
    """Laplace transform of the p-adic heat kernel: power series vs ball sum."""
    lhs, rhs = nilsson_sides(p, v, s)
    acc = _Accumulator()
    acc.add((p, v, float(s)), lhs, rhs)
    return acc.report("nilsson", f"p={p}, |x|_p=p^{-v}, s={s:g}", tol)


# ----------------------------------------------------------------- strip equivalence


def check_strip_equivalence(
    space: ZetaSpace,
    grid: Optional[Sequence[complex]] = None,
    tol: float = 1e-8,
    spec: Optional[QuadratureSpec] = None,
) -> CheckReport:
    """Closed form vs an independent route inside the convergence strip.

    Z and the circle compare with the Mellin transform of the heat trace,
    Z^d compares the Mellin route with the Lauricella series, and trees
    compare the Appell-F1 integral with the spectral-measure integral.
    """
    pts = [complex(s) for s in (default_strip_grid(space) if grid is None else grid)]
    kind = space.kind
    spec = spec or QuadratureSpec()
    if kind == "Z":
        pair = (zeta_Z, lambda s: zeta_Zd(1, s, "mellin", spec))
    elif kind == "circle":
        trace = heat_trace_circle()
        pair = (zeta_circle, lambda s: mellin_zeta(trace, s, spec))
    elif kind == "Zd":
        d = space.param
        pair = (lambda s: zeta_Zd(d, s, "lauricella"), lambda s: zeta_Zd(d, s, "mellin", spec))
    elif kind == "tree":
        q = space.param
        pair = (lambda s: zeta_tree(q, s), lambda s: zeta_tree_spectral_measure(q, s))
    else:
        raise DomainError(f"no strip equivalence is defined for space {space}")
    acc = _Accumulator()
    for s in pts:
        acc.add((s,), pair[0](s), pair[1](s))
    return acc.report(f"strip:{space}", f"{len(pts)} points", tol)
