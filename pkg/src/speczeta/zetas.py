r"""Closed-form and hypergeometric zeta functions of Laplacian spectra.

Every space here has a second, independent route to the same numbers (Mellin
transform of a heat trace, or integration against a spectral measure); those
cross-checks live in :mod:`speczeta.identities`.

Powers ``x**(-s)`` are principal powers of positive reals throughout.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError
from .heat import heat_trace_Zd
from .mellin import QuadratureSpec, integrate_adaptive, mellin_zeta
from .specialfn import (
    DirichletCharacter,
    _expm1_over,
    _hurwitz_any,
    gamma,
    is_prime,
    log_gamma,
    rgamma,
    riemann_zeta,
)
from .spectra import FiniteGraphSpectrum

__all__ = [
    "ZetaSpace",
    "zeta_Z",
    "zeta_Z_binomial",
    "xi_Z",
    "zeta_circle",
    "xi_circle",
    "zeta_cycle",
    "finite_graph_zeta",
    "lauricella_FC",
    "zeta_Zd",
    "appell_F1_picard",
    "zeta_tree",
    "zeta_tree_spectral_measure",
    "tree_measure_moment",
    "zeta_p",
    "xi_p",
    "cyclic_L",
    "completed_cyclic_L",
    "evaluate",
]

_SQRT_PI = math.sqrt(math.pi)
_LOG4 = math.log(4.0)
# radius inside which removable singularities switch to their limit formulas
_LIMIT_RADIUS = 1e-3


def _near_int(x: float) -> Optional[int]:
    k = round(x)
    return k if x == k else None


# ----------------------------------------------------------------- Z and Z/nZ


def zeta_Z(s: complex) -> complex:
    """Spectral zeta function of the graph Z, ``Gamma(1/2-s) / (4^s sqrt(pi) Gamma(1-s))``.

    Zero at the positive integers; poles at ``s = 1/2, 3/2, ...``. For
    ``Re s < -1`` the value is carried over from the strip ``[-1, 0)`` by the
    exact recurrence ``zeta(s-1) = 2 (1-2s)/(1-s) zeta(s)``, which keeps the
    integer values at negative integers accurate to a few ulps.
    """
    s = complex(s)
    if s.imag == 0.0:
        k = _near_int(s.real)
        if k is not None and k >= 1:
            return 0j
        h = _near_int(s.real - 0.5)
        if h is not None and h >= 0:
            raise PoleError(f"zeta_Z has a pole at s = {s.real:g}")
    shift = 0
    base = s
    while base.real < -1.0:
        base += 1.0
        shift += 1
    value = cmath.exp(log_gamma(0.5 - base) - log_gamma(1.0 - base) - base * _LOG4) / _SQRT_PI
    # walk back down: zeta(w-1) = 2 (1 - 2w)/(1 - w) zeta(w)
    w = base
    for _ in range(shift):
        value *= 2.0 * (1.0 - 2.0 * w) / (1.0 - w)
        w -= 1.0
    return value


def zeta_Z_binomial(s: complex) -> complex:
    """``Gamma(1-2s) / Gamma(1-s)^2``, the central binomial coefficient ``(-2s choose -s)``."""
    s = complex(s)
    if s.imag == 0.0:
        k = _near_int(s.real)
        if k is not None and k >= 1:
            return 0j
        h = _near_int(s.real - 0.5)
        if h is not None and h >= 0:
            raise PoleError(f"zeta_Z has a pole at s = {s.real:g}")
    r = rgamma(1.0 - s)
    return gamma(1.0 - 2.0 * s) * r * r


def xi_Z(s: complex) -> complex:
    """Completed zeta of Z, ``2^s cos(pi s/2) zeta_Z(s/2)``; entire.

    At ``s = 1, 3, 5, ...`` the cosine zero cancels a pole of ``zeta_Z(s/2)``;
    within a small radius of those points the equivalent product
    ``sqrt(pi) / (Gamma((1+s)/2) Gamma(1-s/2))`` is used instead.
    """
    s = complex(s)
    k = round(s.real)
    if k >= 1 and k % 2 == 1 and abs(s - k) < _LIMIT_RADIUS:
        return _SQRT_PI * rgamma(0.5 * (1.0 + s)) * rgamma(1.0 - 0.5 * s)
    return 2.0**s * cmath.cos(0.5 * math.pi * s) * zeta_Z(0.5 * s)


def zeta_circle(s: complex) -> complex:
    """Spectral zeta of the circle R/Z, ``2 4^{-s} pi^{-2s} zeta(2s)``."""
    s = complex(s)
    if s == 0.5:
        raise PoleError("zeta_circle has a pole at s = 1/2")
    return 2.0 * 4.0 ** (-s) * math.pi ** (-2.0 * s) * riemann_zeta(2.0 * s)


def xi_circle(s: complex) -> complex:
    """``(1/2) 2^s pi^{s/2} Gamma(s/2) zeta_circle(s/2)``; poles at 0 and 1."""
    s = complex(s)
    if s == 0.0 or s == 1.0:
        raise PoleError("completed circle zeta has poles at s = 0 and s = 1")
    return 0.5 * 2.0**s * math.pi ** (0.5 * s) * gamma(0.5 * s) * zeta_circle(0.5 * s)


def zeta_cycle(n: int, s: complex) -> complex:
    """Spectral zeta of the cycle graph Z/nZ, ``4^{-s} sum_{k=1}^{n-1} sin(pi k/n)^{-2s}``."""
    if n < 2:
        raise DomainError("cycle needs n >= 2")
    s = complex(s)
    k = np.arange(1, n // 2 + 1)
    logs = np.log(np.sin(np.pi * k / n))
    terms = np.exp(-2.0 * s * logs)
    # k and n-k give the same term; the midpoint k = n/2 appears once
    total = 2.0 * terms.sum()
    if n % 2 == 0:
        total -= terms[-1]
    return complex(4.0 ** (-s) * total)


def finite_graph_zeta(spectrum: FiniteGraphSpectrum, s: complex) -> complex:
    """``sum lambda^{-s}`` over the strictly positive eigenvalues."""
    s = complex(s)
    if spectrum.vertex_count < 1:
        raise DomainError("empty spectrum")
    vals = np.array([v for v in spectrum.eigenvalues if v > 0.0])
    return complex(np.exp(-s * np.log(vals)).sum())


# ----------------------------------------------------------------- Z^d


def _log_abs_sign(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values)), np.sign(values)


def _univariate_log_terms(c: float, x: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """log|x^m / ((c)_m m!)| and its sign for m = 0..order."""
    m = np.arange(order + 1, dtype=float)
    steps = np.zeros(order + 1)
    if x == 0.0:
        logs = np.full(order + 1, -np.inf)
        logs[0] = 0.0
        return logs, np.ones(order + 1)
    steps[1:] = math.log(abs(x)) - np.log(np.abs(c + m[:-1])) - np.log(m[1:])
    signs = np.ones(order + 1)
    signs[1:] = np.sign(x) * np.sign(c + m[:-1])
    return np.cumsum(steps), np.cumprod(signs)


def _signed_logsumexp(logs: np.ndarray, signs: np.ndarray) -> tuple[float, float]:
    finite = np.isfinite(logs)
    if not finite.any():
        return -math.inf, 0.0
    top = logs[finite].max()
    acc = float(np.sum(signs[finite] * np.exp(logs[finite] - top)))
    if acc == 0.0:
        return -math.inf, 0.0
    return top + math.log(abs(acc)), math.copysign(1.0, acc)


def _fc_shells(c: Sequence[float], x: Sequence[float], order: int) -> tuple[np.ndarray, np.ndarray]:
    """log|S_N|, sign(S_N) with ``S_N = sum_{|m|=N} prod x_i^{m_i} / ((c_i)_{m_i} m_i!)``."""
    logs, signs = _univariate_log_terms(c[0], x[0], order)
    for ci, xi in zip(c[1:], x[1:]):
        ul, us = _univariate_log_terms(ci, xi, order)
        new_l = np.empty(order + 1)
        new_s = np.empty(order + 1)
        for n in range(order + 1):
            new_l[n], new_s[n] = _signed_logsumexp(ul[: n + 1] + logs[n::-1], us[: n + 1] * signs[n::-1])
        logs, signs = new_l, new_s
    return logs, signs


def _log_pochhammer(a: complex, order: int) -> np.ndarray:
    """log (a)_N for N = 0..order (any branch; only exponentiated)."""
    out = np.zeros(order + 1, dtype=complex)
    with np.errstate(divide="ignore"):
        out[1:] = np.cumsum(np.log(a + np.arange(order, dtype=complex)))
    return out


def lauricella_FC(
    a: complex,
    b: complex,
    c: Sequence[float],
    x: Sequence[float],
    max_order: int = 2000,
    tail_exponent: Optional[complex] = None,
) -> tuple[complex, float]:
    r"""Lauricella ``F_C^{(d)}(a, b; c_1..c_d; x_1..x_d)`` summed by total degree.

    The degree-``N`` shell is ``(a)_N (b)_N S_N`` where ``S_N`` is a
    ``d``-fold convolution of univariate sequences, so the cost is
    ``O(d * max_order**2)`` regardless of how the ``x_i`` are chosen.

    On the boundary ``sum sqrt|x_i| = 1`` the shells decay only like a power
    ``N**tail_exponent``. When that exponent is supplied the remainder past
    ``max_order`` is estimated by fitting the last shells to
    ``N**beta (c_0 + c_1/N + ...)`` and summing the fit with Hurwitz zeta
    values.

    Returns
    -------
    value : complex
    error_estimate : float
        Magnitude of the last shell, or the spread between two tail fits of
        different order when the tail is completed.

    Raises
    ------
    ConvergenceError
        If shell magnitudes grow for 5 consecutive degrees.
    """
    c = [float(v) for v in c]
    x = [float(v) for v in x]
    if len(c) != len(x) or not c:
        raise DomainError("c and x must have the same positive length")
    if any(v <= 0 for v in c):
        raise DomainError("all c_i must be positive")
    if sum(math.sqrt(abs(v)) for v in x) > 1.0 + 1e-12:
        raise DomainError("F_C series requires sum sqrt|x_i| <= 1")
    a = complex(a)
    b = complex(b)
    order = int(max_order)
    logs, signs = _fc_shells(c, x, order)
    log_ab = _log_pochhammer(a, order) + _log_pochhammer(b, order)
    with np.errstate(invalid="ignore", over="ignore"):
        shells = np.where(np.isfinite(logs), signs * np.exp(log_ab + np.where(np.isfinite(logs), logs, 0.0)), 0.0)
    shells = np.nan_to_num(shells, nan=0.0)
    mags = np.abs(shells)
    growing = 0
    for n in range(1, order + 1):
        if mags[n] > mags[n - 1] and mags[n] > 0:
            growing += 1
            if growing >= 5 and n > 10:
                raise ConvergenceError(f"F_C shells grow at degree {n}; series diverges here")
        else:
            growing = 0
    partial = complex(shells.sum())
    if tail_exponent is None:
        return partial, float(mags[-1])
    tail_a = _fitted_tail(shells, complex(tail_exponent), 8)
    tail_b = _fitted_tail(shells, complex(tail_exponent), 6)
    return partial + tail_a, abs(tail_a - tail_b)


def _fitted_tail(shells: np.ndarray, beta: complex, n_coef: int) -> complex:
    """Estimate sum_{N > M} of shells modelled as N^beta * sum_j c_j N^{-j}."""
    order = len(shells) - 1
    n = np.arange(order // 4, order + 1, dtype=float)
    basis = np.exp(beta * np.log(n))[:, None] * (float(order) / n)[:, None] ** np.arange(n_coef)[None, :]
    coef, *_ = np.linalg.lstsq(basis, shells[order // 4 :], rcond=None)
    tail = 0j
    for j, cj in enumerate(coef):
        # sum_{N > M} (M/N)^j N^beta = M^j zeta(j - beta, M + 1)
        tail += cj * float(order) ** j * _hurwitz_any(j - beta, order + 1.0)
    return complex(tail)


def zeta_Zd(d: int, s: complex, route: str = "mellin", spec: Optional[QuadratureSpec] = None) -> complex:
    """Spectral zeta of the lattice Z^d.

    ``route="mellin"`` integrates the heat trace ``(e^{-2t} I0(2t))^d`` and is
    valid for ``0 < Re s < d/2``; ``route="lauricella"`` evaluates
    ``(2d)^{-s} F_C^{(d)}(s/2, (s+1)/2; 1, .., 1; 1/d^2, .., 1/d^2)``.
    """
    if d < 1:
        raise DomainError("d must be positive")
    s = complex(s)
    if route == "mellin":
        return mellin_zeta(heat_trace_Zd(d), s, spec or QuadratureSpec())
    if route == "lauricella":
        if not s.real < 0.5 * d:
            raise DomainError("the F_C series at x_i = 1/d^2 converges only for Re s < d/2")
        x = [1.0 / (d * d)] * d
        value, _ = lauricella_FC(0.5 * s, 0.5 * (s + 1.0), [1.0] * d, x, 3000, tail_exponent=s - 1.0 - 0.5 * d)
        return (2.0 * d) ** (-s) * value
    raise DomainError(f"unknown route {route!r}; use 'mellin' or 'lauricella'")


# ----------------------------------------------------------------- regular trees


def appell_F1_picard(
    a: float,
    b1: complex,
    b2: complex,
    c: float,
    x: float,
    y: float,
    tol: float = 1e-13,
) -> complex:
    """Appell ``F_1(a; b1, b2; c; x, y)`` from its Euler-type (Picard) integral.

    ``Gamma(c)/(Gamma(a) Gamma(c-a)) int_0^1 t^{a-1} (1-t)^{c-a-1} (1-xt)^{-b1} (1-yt)^{-b2} dt``;
    each half of ``[0, 1]`` gets a power substitution that removes its
    endpoint singularity.
    """
    if not (c > a > 0):
        raise DomainError("Picard integral needs c > a > 0")
    if not (x < 1 and y < 1):
        raise DomainError("Picard integral needs x < 1 and y < 1")
    b1 = complex(b1)
    b2 = complex(b2)
    e = c - a

    def body(t: float) -> complex:
        return cmath.exp(-b1 * math.log1p(-x * t) - b2 * math.log1p(-y * t))

    # [0, 1/2]: t = u^{1/a} / 2
    def left(u: float) -> complex:
        t = 0.5 * u ** (1.0 / a)
        return (1.0 - t) ** (e - 1.0) * body(t)

    # [1/2, 1]: 1 - t = v^{1/e} / 2
    def right(v: float) -> complex:
        t = 1.0 - 0.5 * v ** (1.0 / e)
        return t ** (a - 1.0) * body(t)

    lhs = 0.5**a / a * integrate_adaptive(left, 0.0, 1.0, tol)
    rhs = 0.5**e / e * integrate_adaptive(right, 0.0, 1.0, tol)
    norm = math.exp(math.lgamma(c) - math.lgamma(a) - math.lgamma(e))
    return norm * (lhs + rhs)


def _tree_uv(q: int) -> tuple[float, float]:
    r = math.sqrt(q)
    return -4.0 * r / (r - 1.0) ** 2, 4.0 * r / (r + 1.0) ** 2


def zeta_tree(q: int, s: complex) -> complex:
    """Spectral zeta of the (q+1)-regular tree through Appell's ``F_1(3/2; s+1, 1; 3; u, v)``."""
    if q < 2:
        raise DomainError("tree zeta needs q >= 2")
    s = complex(s)
    if not s.real > -1.0:
        raise DomainError("tree zeta is implemented for Re s > -1")
    u, v = _tree_uv(q)
    r = math.sqrt(q)
    pref = q * (q + 1) / ((q - 1) ** 2) * (r - 1.0) ** (-2.0 * s)
    return pref * appell_F1_picard(1.5, s + 1.0, 1.0, 3.0, u, v)


def _tree_density_theta(q: int, theta: float) -> tuple[float, float]:
    """(lambda, density * dlambda/dtheta) with x = 2 sqrt(q) cos(theta), lambda = q + 1 - x."""
    r = math.sqrt(q)
    xv = 2.0 * r * math.cos(theta)
    # sqrt(4q - x^2) dx = 4 q sin^2(theta) dtheta
    weight = (q + 1) * 4.0 * q * math.sin(theta) ** 2 / (2.0 * math.pi * ((q + 1) ** 2 - xv * xv))
    return q + 1 - xv, weight


def tree_measure_moment(q: int, power: int, tol: float = 1e-14) -> float:
    """``int x^power dmu`` of the rooted spectral measure in the adjacency variable x."""

    def f(theta: float) -> complex:
        lam, w = _tree_density_theta(q, theta)
        return (q + 1 - lam) ** power * w

    return integrate_adaptive(f, 0.0, math.pi, tol).real


def zeta_tree_spectral_measure(q: int, s: complex, tol: float = 1e-13) -> complex:
    """``int lambda^{-s} dmu(lambda)`` against the Kesten-McKay measure of the (q+1)-regular tree."""
    if q < 2:
        raise DomainError("tree zeta needs q >= 2")
    s = complex(s)

    def f(theta: float) -> complex:
        lam, w = _tree_density_theta(q, theta)
        return cmath.exp(-s * math.log(lam)) * w

    return integrate_adaptive(f, 0.0, math.pi, tol)


# ----------------------------------------------------------------- p-adic


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def zeta_p(p: int, s: complex) -> complex:
    """Spectral zeta of Q_p / Z_p, ``(p-1) / (p^{2s} - p)``."""
    _check_prime(p)
    s = complex(s)
    den = p ** (2.0 * s) - p
    if den == 0 or abs(den) < 1e-15 * p:
        raise PoleError(f"zeta_p has a pole at s = {s}")
    return (p - 1) / den


def xi_p(p: int, s: complex) -> complex:
    """``sin(2 pi s) p^s zeta_p(s)``; the real pole at s = 1/2 is removable.

    Near ``s = 1/2`` the quotient is rearranged as
    ``[sin(2 pi s)/(s - 1/2)] * [(s - 1/2)/(p^{2s} - p)]`` with both factors
    evaluated without cancellation.
    """
    _check_prime(p)
    s = complex(s)
    eps = s - 0.5
    if abs(eps) < 0.1:
        logp = math.log(p)
        # sin(2 pi s) = -sin(2 pi eps)
        w = 2.0 * math.pi * eps
        sinc = _sinc(w)
        ratio = 1.0 / (p * 2.0 * logp * _expm1_over(2.0 * eps * logp))
        return -2.0 * math.pi * sinc * ratio * p**s * (p - 1)
    return cmath.sin(2.0 * math.pi * s) * p**s * zeta_p(p, s)


def _sinc(w: complex) -> complex:
    if abs(w) < 1e-4:
        return 1.0 - w * w / 6.0
    return cmath.sin(w) / w


# ----------------------------------------------------------------- cyclic L


def cyclic_L(n: int, s: complex, chi: DirichletCharacter) -> complex:
    """``L_n(s, chi) = sum_{k=1}^{mn-1} chi(k) / sin(pi k / mn)^s``."""
    m = chi.modulus
    if m < 3:
        raise DomainError("cyclic L-function needs modulus >= 3")
    if n < 1:
        raise DomainError("n must be >= 1")
    s = complex(s)
    N = m * n
    k = np.arange(1, N)
    vals = np.asarray(chi.values, dtype=complex)[k % m]
    mask = vals != 0
    logs = np.log(np.sin(np.pi * k[mask] / N))
    return complex(np.sum(vals[mask] * np.exp(-s * logs)))


def completed_cyclic_L(n: int, s: complex, chi: DirichletCharacter) -> complex:
    """``Lambda_n(s, chi) = n^{-s} (pi/m)^{s/2} Gamma(s/2) L_n(s, chi)``, m the modulus."""
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0 and s.real / 2 == math.floor(s.real / 2):
        raise PoleError(f"Gamma(s/2) has a pole at s = {s.real:g}")
    m = chi.modulus
    return n ** (-s) * (math.pi / m) ** (0.5 * s) * gamma(0.5 * s) * cyclic_L(n, s, chi)


# ----------------------------------------------------------------- dispatch


_KINDS = ("Z", "circle", "cycle", "Zd", "tree", "padic")


@dataclass(frozen=True)
class ZetaSpace:
    """One of the spaces with a spectral zeta function, e.g. ``ZetaSpace("cycle", 10)``."""

    kind: str
    param: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise DomainError(f"unknown space kind {self.kind!r}")
        needs = self.kind in ("cycle", "Zd", "tree", "padic")
        if needs != (self.param is not None):
            raise DomainError(f"space {self.kind!r} {'needs' if needs else 'takes no'} integer parameter")
        if self.kind == "cycle" and self.param < 2:
            raise DomainError("cycle:n needs n >= 2")
        if self.kind == "Zd" and self.param < 1:
            raise DomainError("Zd:d needs d >= 1")
        if self.kind == "tree" and self.param < 2:
            raise DomainError("tree:q needs q >= 2")
        if self.kind == "padic" and not is_prime(self.param):
            raise DomainError("padic:p needs a prime p")

    @classmethod
    def parse(cls, text: str) -> "ZetaSpace":
        """Parse ``Z | circle | cycle:<n> | Zd:<d> | tree:<q> | padic:<p>``."""
        kind, sep, rest = text.strip().partition(":")
        if not sep:
            return cls(kind)
        try:
            param = int(rest)
        except ValueError:
            raise DomainError(f"bad integer parameter in space spec {text!r}") from None
        return cls(kind, param)

    def __str__(self) -> str:
        return self.kind if self.param is None else f"{self.kind}:{self.param}"


def evaluate(space: ZetaSpace, s: complex, route: Optional[str] = None) -> complex:
    """Evaluate the zeta function of the Laplacian on ``space`` at ``s``.

    ``route`` selects between closed form and an independent route where one
    exists: ``closed``/``binomial``/``mellin`` for Z, ``mellin``/``lauricella``
    for Z^d, ``appell``/``measure`` for trees.
    """
    kind = space.kind
    if kind == "Z":
        if route in (None, "closed"):
            return zeta_Z(s)
        if route == "binomial":
            return zeta_Z_binomial(s)
        if route == "mellin":
            return zeta_Zd(1, s, "mellin")
    elif kind == "circle":
        if route in (None, "closed"):
            return zeta_circle(s)
        if route == "mellin":
            from .heat import heat_trace_circle

            return mellin_zeta(heat_trace_circle(), s)
    elif kind == "cycle":
        if route in (None, "closed"):
            return zeta_cycle(space.param, s)
        if route == "spectrum":
            from .spectra import cycle_spectrum

            return finite_graph_zeta(cycle_spectrum(space.param), s)
    elif kind == "Zd":
        if route in (None, "mellin", "lauricella"):
            return zeta_Zd(space.param, s, route or "mellin")
    elif kind == "tree":
        if route in (None, "appell", "closed"):
            return zeta_tree(space.param, s)
        if route == "measure":
            return zeta_tree_spectral_measure(space.param, s)
    elif kind == "padic":
        if route in (None, "closed"):
            return zeta_p(space.param, s)
    raise DomainError(f"route {route!r} is not available for space {space}")
