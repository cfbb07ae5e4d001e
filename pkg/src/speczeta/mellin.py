"""Mellin-transform zeta engine.

``zeta(s) = Gamma(s)^{-1} int_0^inf (trace(t) - const) t^{s-1} dt`` evaluated as
three pieces: ``(0, T]`` with a power substitution that removes the endpoint
singularity, ``[T, T_far]`` in logarithmic variable, and an analytic tail from
the large-``t`` expansion of the trace.
"""
from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ConvergenceError, DomainError, StripError
from .heat import HeatTrace
from .specialfn import rgamma

__all__ = ["QuadratureSpec", "integrate_adaptive", "mellin_zeta", "zeta_prime_at_zero", "determinant"]

# Gauss-Kronrod 21-point rule (abscissae on [0, 1); symmetric about 0).
_XGK = (
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
)
_WGK = (
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525197542,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
)
# 10-point Gauss weights, at the odd positions of _XGK
_WG = (
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651146,
)
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy and layout parameters for :func:`mellin_zeta`.

    ``far_point`` is where numerical quadrature hands over to the analytic
    tail; ``tail_terms`` is how many asymptotic coefficients the tail uses.
    """

    tolerance: float = 1e-11
    split_point: float = 1.0
    tail_terms: int = 3
    max_subdivisions: int = 2000
    far_point: float = 1e4

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if not self.split_point > 0:
            raise DomainError("split_point must be positive")
        if not 1 <= self.tail_terms <= 3:
            raise DomainError("tail_terms must be 1, 2 or 3")
        if not self.far_point > self.split_point:
            raise DomainError("far_point must exceed split_point")


def _gk21(f: Callable[[float], complex], a: float, b: float) -> tuple[complex, float, float]:
    """GK21 estimate on [a, b]: (value, error estimate, rounding floor)."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    res_k = fc * _WGK[10]
    res_g = 0j
    res_abs = abs(fc) * _WGK[10]
    for j in range(10):
        dx = half * _XGK[j]
        f1 = f(center - dx)
        f2 = f(center + dx)
        res_k += _WGK[j] * (f1 + f2)
        res_abs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f1 + f2)
    floor = 50.0 * _EPS * res_abs * abs(half)
    err = max(abs(res_k - res_g) * half, floor)
    return res_k * half, err, floor


def integrate_adaptive(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float,
    max_subdivisions: int = 2000,
) -> complex:
    """Integrate ``f`` over ``[a, b]`` to absolute error ``tol`` by adaptive GK21 bisection.

    Refinement also stops once the error estimate is within twice the
    accumulated rounding floor, so a ``tol`` below what double precision can
    deliver returns the best attainable value instead of looping.

    Raises
    ------
    ConvergenceError
        If the error estimate is still above ``tol`` after ``max_subdivisions``
        bisections.
    """
    if not a < b:
        raise DomainError("integrate_adaptive requires a < b")
    value, err, floor = _gk21(f, a, b)
    heap = [(-err, a, b, value, floor)]
    total_err = err
    total_floor = floor
    splits = 0
    while total_err > max(tol, 2.0 * total_floor):
        if splits >= max_subdivisions:
            raise ConvergenceError(
                f"adaptive quadrature on [{a:g}, {b:g}] stalled at error {total_err:.3g} > {tol:.3g}"
            )
        neg_err, lo, hi, val, fl = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise ConvergenceError("interval can no longer be bisected")
        v1, e1, f1 = _gk21(f, lo, mid)
        v2, e2, f2 = _gk21(f, mid, hi)
        total_err += e1 + e2 + neg_err
        total_floor += f1 + f2 - fl
        heapq.heappush(heap, (-e1, lo, mid, v1, f1))
        heapq.heappush(heap, (-e2, mid, hi, v2, f2))
        splits += 1
        if splits % 64 == 0:
            # resum to stop drift in the running totals
            total_err = -math.fsum(item[0] for item in heap)
            total_floor = math.fsum(item[4] for item in heap)
    return complex(sum(item[3] for item in heap))


def mellin_zeta(trace: HeatTrace, s: complex, spec: QuadratureSpec = QuadratureSpec()) -> complex:
    """Spectral zeta value ``Gamma(s)^{-1} int_0^inf (trace - const) t^{s-1} dt``.

    Valid for ``0 < Re s < trace.tail_exponent``.

    Raises
    ------
    StripError
        If ``Re s`` is outside the strip.
    ConvergenceError
        If the quadrature cannot reach ``spec.tolerance``.
    """
    s = complex(s)
    sigma = s.real
    alpha = trace.tail_exponent
    if not 0.0 < sigma < alpha:
        raise StripError(f"Re s = {sigma:g} is outside the strip (0, {alpha:g}) of trace {trace.name}")
    T = spec.split_point
    inv_gamma = rgamma(s)
    # the integral is scaled by 1/Gamma(s) afterwards
    tol = spec.tolerance / max(abs(inv_gamma), 1.0)

    # (0, T]: analytic small-t terms plus the remainder under t = T u^{1/q}
    head = 0j
    for c, power in trace.small_t_terms:
        head += c * T ** (s + power) / (s + power)
    q = min(sigma + trace.small_t_order, 1.0)
    scale = T**s / q
    expo = s / q - 1.0

    def near(u: float) -> complex:
        t = T * u ** (1.0 / q)
        return trace.remainder(t) * cmath.exp(expo * math.log(u))

    head += scale * integrate_adaptive(near, 0.0, 1.0, tol / max(abs(scale), 1.0), spec.max_subdivisions)

    # [T, T_far] in y = log t
    if math.isinf(alpha):
        far = _decay_point(trace, T, spec.far_point)
    else:
        far = spec.far_point
    const = trace.subtract_constant

    def mid(y: float) -> complex:
        t = math.exp(y)
        return (trace.evaluator(t) - const) * cmath.exp(s * y)

    body = integrate_adaptive(mid, math.log(T), math.log(far), tol, spec.max_subdivisions)

    tail = 0j
    if not math.isinf(alpha):
        for k, c in enumerate(trace.tail_coefficients[: spec.tail_terms]):
            tail += c * far ** (s - alpha - k) / (alpha + k - s)
    return (head + body + tail) * inv_gamma


def _decay_point(trace: HeatTrace, start: float, limit: float) -> float:
    # for exponentially decaying traces stop where trace - const is negligible
    t = 2.0 * start
    while t < limit and abs(trace.evaluator(t) - trace.subtract_constant) > 1e-300:
        t *= 2.0
    return min(t, limit)


def zeta_prime_at_zero(eigenvalues: Sequence[float]) -> float:
    """``d/ds sum lambda^{-s}`` at ``s = 0``, i.e. ``-sum log lambda``."""
    vals = [float(v) for v in eigenvalues]
    if any(not v > 0 for v in vals):
        raise DomainError("zeta_prime_at_zero needs strictly positive eigenvalues")
    return -math.fsum(math.log(v) for v in vals)


def determinant(eigenvalues: Sequence[float]) -> float:
    """Zeta-regularized determinant ``exp(-zeta'(0))`` of a finite positive spectrum."""
    return math.exp(-zeta_prime_at_zero(eigenvalues))
