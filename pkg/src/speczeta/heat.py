"""Heat kernels and heat traces: Z, Z^d, the circle R/Z and the p-adic line Q_p.

A :class:`HeatTrace` bundles a pointwise evaluator with the asymptotic data the
Mellin engine needs to integrate it to high accuracy: the polynomial decay at
large ``t`` and, optionally, the singular or constant terms at small ``t``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import ConvergenceError, DomainError
from .specialfn import is_prime, scaled_bessel_i0

__all__ = [
    "HeatTrace",
    "PAdicAbs",
    "heat_trace_Z",
    "heat_trace_Zd",
    "heat_trace_circle",
    "combine_traces",
    "circle_heat_kernel_spectral",
    "circle_heat_kernel_periodized",
    "padic_heat_kernel_shell",
    "padic_heat_kernel_series",
    "padic_series_envelope",
]

_TERM_FLOOR = 1e-18
# ratio t |x|_p^{-2} p^2 must stay below this for the small-t series
_SERIES_ENVELOPE = 1.0


@dataclass(frozen=True)
class HeatTrace:
    """Heat trace descriptor.

    Attributes
    ----------
    evaluator : callable
        ``t -> trace(t)`` for ``t > 0``.
    limit_at_zero : float
        Value approached as ``t -> 0+`` (``inf`` when the trace blows up).
    subtract_constant : float
        Constant removed from the trace before the Mellin transform.
    tail_exponent : float
        ``alpha`` in ``trace(t) ~ t^{-alpha} (c0 + c1/t + ...)`` as ``t -> inf``;
        ``inf`` for exponentially decaying traces.
    tail_coefficients : tuple of float
        ``c0 .. cK`` of the large-``t`` expansion (empty if exponential decay).
    small_t_terms : tuple of (coefficient, power)
        Expansion ``trace(t) - subtract_constant ~ sum c t^power`` at ``t -> 0+``;
        the Mellin engine integrates these terms analytically on ``(0, T]``.
    small_t_order : float
        Power of ``t`` of the first neglected small-``t`` term.
    small_t_remainder : callable, optional
        Direct evaluator of ``trace - subtract_constant - sum c t^power``,
        used instead of the subtraction when cancellation would hurt.
    name : str
    """

    evaluator: Callable[[float], float]
    limit_at_zero: float
    subtract_constant: float
    tail_exponent: float
    tail_coefficients: tuple[float, ...]
    small_t_terms: tuple[tuple[float, float], ...] = ()
    small_t_order: float = 0.0
    small_t_remainder: Optional[Callable[[float], float]] = field(default=None, compare=False)
    name: str = "trace"

    def __call__(self, t: float) -> float:
        return self.evaluator(t)

    def tail(self, t: float, terms: Optional[int] = None) -> float:
        """Large-``t`` asymptotic approximation with ``terms`` coefficients."""
        coef = self.tail_coefficients[: terms if terms is not None else len(self.tail_coefficients)]
        return t ** (-self.tail_exponent) * sum(c * t ** (-k) for k, c in enumerate(coef))

    def remainder(self, t: float) -> float:
        """``trace(t) - subtract_constant - small-t terms``."""
        if self.small_t_remainder is not None:
            return self.small_t_remainder(t)
        value = self.evaluator(t) - self.subtract_constant
        for c, power in self.small_t_terms:
            value -= c * t**power
        return value


def _z_trace(t: float) -> float:
    return scaled_bessel_i0(2.0 * t)


# e^{-u} I0(u) ~ (2 pi u)^{-1/2} (1 + 1/(8u) + 9/(128u^2)) at u = 2t
_Z_TAIL = tuple(c / math.sqrt(4.0 * math.pi) for c in (1.0, 1.0 / 16.0, 9.0 / 512.0))


def heat_trace_Z() -> HeatTrace:
    """``e^{-2t} I0(2t)``, the return probability kernel of the graph Z."""
    return HeatTrace(
        evaluator=_z_trace,
        limit_at_zero=1.0,
        subtract_constant=0.0,
        tail_exponent=0.5,
        tail_coefficients=_Z_TAIL,
        small_t_terms=((1.0, 0.0),),
        small_t_order=1.0,
        name="Z",
    )


def _power_series(coef: Sequence[float], d: int, terms: int) -> tuple[float, ...]:
    out = [1.0] + [0.0] * (terms - 1)
    for _ in range(d):
        nxt = [0.0] * terms
        for i, a in enumerate(out):
            for j, b in enumerate(coef[: terms - i]):
                nxt[i + j] += a * b
        out = nxt
    return tuple(out)


def heat_trace_Zd(d: int) -> HeatTrace:
    """``(e^{-2t} I0(2t))^d``, the heat trace of the lattice Z^d (1 <= d <= 8)."""
    if not 1 <= d <= 8:
        raise DomainError("heat_trace_Zd supports 1 <= d <= 8")
    if d == 1:
        return heat_trace_Z()
    unit = (1.0, 1.0 / 16.0, 9.0 / 512.0)
    coef = tuple(c * (4.0 * math.pi) ** (-d / 2) for c in _power_series(unit, d, 3))
    return HeatTrace(
        evaluator=lambda t: scaled_bessel_i0(2.0 * t) ** d,
        limit_at_zero=1.0,
        subtract_constant=0.0,
        tail_exponent=d / 2,
        tail_coefficients=coef,
        small_t_terms=((1.0, 0.0),),
        small_t_order=1.0,
        name=f"Z^{d}",
    )


def _circle_trace(t: float) -> float:
    if t < 0.25:
        return circle_heat_kernel_periodized(t, 0.0)
    return circle_heat_kernel_spectral(t, 0.0).real


def _circle_remainder(t: float) -> float:
    # trace - 1 - (4 pi t)^{-1/2} + 1
    if t < 0.25:
        acc = 0.0
        n = 1
        while True:
            term = math.exp(-n * n / (4.0 * t))
            acc += term
            if term < _TERM_FLOOR * max(acc, 1e-300):
                break
            n += 1
        return 2.0 * acc / math.sqrt(4.0 * math.pi * t)
    return _circle_trace(t) - 1.0 / math.sqrt(4.0 * math.pi * t)


def heat_trace_circle() -> HeatTrace:
    """``sum_n e^{-4 pi^2 n^2 t}`` on R/Z with the zero mode removed.

    The small-``t`` singularity ``(4 pi t)^{-1/2}`` and the removed constant are
    integrated analytically by the Mellin engine, which makes the result valid
    for every ``Re s > 0``.
    """
    return HeatTrace(
        evaluator=_circle_trace,
        limit_at_zero=math.inf,
        subtract_constant=1.0,
        tail_exponent=math.inf,
        tail_coefficients=(),
        small_t_terms=((1.0 / math.sqrt(4.0 * math.pi), -0.5), (-1.0, 0.0)),
        small_t_order=math.inf,
        small_t_remainder=_circle_remainder,
        name="circle",
    )


def combine_traces(traces: Sequence[HeatTrace], weights: Sequence[float]) -> HeatTrace:
    """Positive linear combination of heat traces.

    Tail exponents must differ by integers so the large-``t`` expansions can be
    merged into a single series.
    """
    if len(traces) != len(weights) or not traces:
        raise DomainError("need matching, non-empty traces and weights")
    if any(w <= 0 for w in weights):
        raise DomainError("weights must be positive")
    alpha = min(tr.tail_exponent for tr in traces)
    n_terms = min(len(tr.tail_coefficients) for tr in traces)
    coef = [0.0] * n_terms
    for tr, w in zip(traces, weights):
        shift = tr.tail_exponent - alpha
        if math.isinf(alpha) or (math.isinf(tr.tail_exponent) and not math.isinf(alpha)):
            continue
        if abs(shift - round(shift)) > 1e-12:
            raise DomainError("tail exponents must differ by integers")
        for k, c in enumerate(tr.tail_coefficients):
            if k + round(shift) < n_terms:
                coef[k + round(shift)] += w * c
    small: dict[float, float] = {}
    for tr, w in zip(traces, weights):
        for c, power in tr.small_t_terms:
            small[power] = small.get(power, 0.0) + w * c
    funcs = [tr.evaluator for tr in traces]
    wts = list(weights)
    return HeatTrace(
        evaluator=lambda t: sum(w * f(t) for w, f in zip(wts, funcs)),
        limit_at_zero=sum(w * tr.limit_at_zero for tr, w in zip(traces, weights)),
        subtract_constant=sum(w * tr.subtract_constant for tr, w in zip(traces, weights)),
        tail_exponent=alpha,
        tail_coefficients=tuple(coef),
        small_t_terms=tuple((c, p) for p, c in sorted(small.items())),
        small_t_order=min(tr.small_t_order for tr in traces),
        name="+".join(tr.name for tr in traces),
    )


def circle_heat_kernel_spectral(t: float, x: float) -> complex:
    """``sum_{n in Z} e^{-4 pi^2 n^2 t} e^{2 pi i n x}``."""
    if t <= 0:
        raise DomainError("heat kernel needs t > 0")
    # pair n and -n: 1 + 2 sum cos(2 pi n x) e^{-4 pi^2 n^2 t}
    total = 1.0
    n = 1
    while True:
        weight = math.exp(-4.0 * math.pi**2 * n * n * t)
        if weight < _TERM_FLOOR:
            break
        total += 2.0 * weight * math.cos(2.0 * math.pi * n * x)
        n += 1
    return complex(total, 0.0)


def circle_heat_kernel_periodized(t: float, x: float) -> float:
    """``(4 pi t)^{-1/2} sum_{n in Z} e^{-(x+n)^2 / 4t}``."""
    if t <= 0:
        raise DomainError("heat kernel needs t > 0")
    x0 = x - math.floor(x)
    # terms ordered by distance of x0 + n from the origin
    total = 0.0
    for n in range(0, -10**6, -1):
        term = math.exp(-((x0 + n) ** 2) / (4.0 * t))
        total += term
        if term < _TERM_FLOOR * total:
            break
    for n in range(1, 10**6):
        term = math.exp(-((x0 + n) ** 2) / (4.0 * t))
        total += term
        if term < _TERM_FLOOR * total:
            break
    return total / math.sqrt(4.0 * math.pi * t)


@dataclass(frozen=True)
class PAdicAbs:
    """A point of Q_p known only through its absolute value ``|x|_p = p^{-valuation}``."""

    p: int
    valuation: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @property
    def abs(self) -> float:
        return float(self.p) ** (-self.valuation)


def _shell_weight(t: float, p: int, k: int) -> float:
    # e^{-t p^{2k}} - e^{-t p^{2k+2}} without cancellation for small exponents
    a = t * float(p) ** (2 * k)
    b = t * float(p) ** (2 * k + 2)
    return math.exp(-a) * -math.expm1(a - b)


def padic_heat_kernel_shell(p: int, x: Optional[PAdicAbs], t: float) -> float:
    """Heat kernel on Q_p summed over balls: ``sum_k (e^{-tp^{2k}} - e^{-tp^{2k+2}}) p^k C_{p^{-k}}(x)``.

    ``x = None`` stands for the origin, where every ball contributes.
    """
    if t <= 0:
        raise DomainError("heat kernel needs t > 0")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if x is not None and x.p != p:
        raise DomainError("PAdicAbs prime does not match p")
    # C_{p^{-k}}(x) = 1 iff |x|_p <= p^{-k} iff k <= v
    if x is None:
        # start where e^{-t p^{2k}} is already below the floor
        k_top = math.ceil(0.5 * math.log(max(40.0 / t, 1.0)) / math.log(p)) + 1
    else:
        k_top = x.valuation
    total = 0.0
    k = k_top
    while True:
        term = _shell_weight(t, p, k) * float(p) ** k
        total += term
        # below the peak the terms decay geometrically like p^{3k}
        if t * float(p) ** (2 * k + 2) < 1.0 and term < _TERM_FLOOR * total:
            break
        if total == 0.0 and t * float(p) ** (2 * k) < 1e-300:
            break
        k -= 1
    return total


def padic_series_envelope(p: int, x: PAdicAbs, t: float) -> float:
    """Ratio ``t p^2 / |x|_p^2`` governing the small-``t`` series; must be < 1."""
    return t * p * p / (x.abs * x.abs)


def padic_heat_kernel_series(p: int, x: Optional[PAdicAbs], t: float) -> float:
    """Heat kernel on Q_p from its power series in ``t`` (valid for ``x != 0``).

    Raises
    ------
    DomainError
        If ``x`` is the origin.
    ConvergenceError
        If ``t p^2 / |x|_p^2 >= 1``; the alternating series would lose too
        many digits to cancellation.
    """
    if x is None:
        raise DomainError("the series form is only valid for x != 0")
    if t <= 0:
        raise DomainError("heat kernel needs t > 0")
    if padic_series_envelope(p, x, t) >= _SERIES_ENVELOPE:
        raise ConvergenceError(
            f"t = {t:g} is outside the series envelope t p^2 / |x|_p^2 < 1 for p = {p}, v = {x.valuation}"
        )
    xa = x.abs
    pf = float(p)
    total = 0.0
    # m = 0 term vanishes
    power = 1.0 / xa
    m = 0
    while True:
        m += 1
        power *= -t / (m * xa * xa)
        term = power * (1.0 - pf ** (2 * m)) / (1.0 - pf ** (-2 * m - 1))
        total += term
        if abs(term) < _TERM_FLOOR * abs(total) or m > 400:
            return total
