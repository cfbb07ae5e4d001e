r"""Special functions in double precision.

Everything here is written against :mod:`math` and :mod:`cmath` only, so the
zeta machinery built on top has no hidden dependency on a third-party special
function library. Complex scalars are plain Python ``complex``.

Accuracy targets
----------------
* :func:`log_gamma`, :func:`gamma` -- relative error ~1e-13 for ``|z| <= 100``.
* :func:`bessel_i0`, :func:`scaled_bessel_i0` -- relative error ~1e-15.
* :func:`riemann_zeta`, :func:`hurwitz_zeta` -- relative error ~1e-12 for
  ``|Im s| <= 60`` and ``Re s >= -10``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DomainError, PoleError

__all__ = [
    "log_gamma",
    "gamma",
    "rgamma",
    "bessel_i0",
    "scaled_bessel_i0",
    "bernoulli_numbers",
    "riemann_zeta",
    "hurwitz_zeta",
    "DirichletCharacter",
    "make_character",
    "dirichlet_L",
    "is_prime",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

# Crossover between the I0 power series and its asymptotic expansion.
_I0_CROSSOVER = 20.0


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _log_gamma_lanczos(z: complex) -> complex:
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_sin_pi(z: complex) -> complex:
    """log(sin(pi z)) continued analytically through each half plane.

    Uses sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}) so nothing overflows
    for large ``|Im z|``. The real axis is approached from above.
    """
    if z.imag < 0.0:
        return _log_sin_pi(z.conjugate()).conjugate()
    # e^{2 pi i z} is unchanged by integer shifts; near an integer take
    # 1 - e^w = -w expm1(w)/w so the difference keeps its digits
    w = 2j * math.pi * (z - round(z.real))
    if abs(w) < 1.0:
        one_minus = -w * _expm1_over(w)
    else:
        one_minus = 1.0 - cmath.exp(w)
    return cmath.log(0.5j) - 1j * math.pi * z + cmath.log(one_minus)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    The branch cut runs along the negative real axis; on the cut the value is
    the limit from the upper half plane, which matches ``scipy.special.loggamma``.

    Raises
    ------
    PoleError
        If ``z`` is 0 or a negative integer.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"log_gamma has a pole at z = {z.real:g}")
    if z.real < 0.5:
        return _LOG_PI - _log_sin_pi(z) - _log_gamma_lanczos(1.0 - z)
    return _log_gamma_lanczos(z)


def gamma(z: complex) -> complex:
    """Gamma function, reflection formula for ``Re z < 1/2``."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at z = {z.real:g}")
    if z.real < 0.5:
        if z.imag == 0.0:
            # keep real arguments real
            return complex(math.pi / (math.sin(math.pi * z.real) * gamma(1.0 - z).real))
        return cmath.exp(_LOG_PI - _log_sin_pi(z) - _log_gamma_lanczos(1.0 - z))
    return cmath.exp(_log_gamma_lanczos(z))


def rgamma(z: complex) -> complex:
    """Reciprocal Gamma, entire: returns exactly 0 at the poles of Gamma."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0j
    return 1.0 / gamma(z)


def _i0_series(u: float) -> float:
    q = 0.25 * u * u
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if term < 1e-17 * total:
            return total


def _i0_asymptotic_factor(u: float) -> float:
    """Sum of 1 + 1/(8u) + 9/(128u^2) + ..., truncated at the smallest term."""
    total = 1.0
    term = 1.0
    k = 0
    while True:
        k += 1
        nxt = term * (2 * k - 1) ** 2 / (8.0 * k * u)
        if nxt >= term or nxt < 1e-17 * total:
            return total
        term = nxt
        total += term


def bessel_i0(u: float) -> float:
    """Modified Bessel function I0 for real ``u >= 0``.

    Raises
    ------
    DomainError
        If ``u < 0``.
    OverflowError
        If ``e**u`` is not representable; use :func:`scaled_bessel_i0`.
    """
    u = float(u)
    if u < 0.0:
        raise DomainError("bessel_i0 requires u >= 0")
    if u <= _I0_CROSSOVER:
        return _i0_series(u)
    if u > 709.0:
        raise OverflowError("bessel_i0 overflows; use scaled_bessel_i0")
    return math.exp(u) / math.sqrt(2.0 * math.pi * u) * _i0_asymptotic_factor(u)


def scaled_bessel_i0(u: float) -> float:
    """``exp(-u) * I0(u)``, overflow-free for every ``u >= 0``."""
    u = float(u)
    if u < 0.0:
        raise DomainError("scaled_bessel_i0 requires u >= 0")
    if u <= _I0_CROSSOVER:
        return math.exp(-u) * _i0_series(u)
    return _i0_asymptotic_factor(u) / math.sqrt(2.0 * math.pi * u)


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # B_0..B_n via sum_{k<m+1} C(m+1, k) B_k = 0
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        binom = 1
        for k in range(m):
            acc += binom * b[k]
            binom = binom * (m + 1 - k) // (k + 1)
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli_numbers(count: int) -> list[Fraction]:
    """Exact Bernoulli numbers ``B_0 .. B_{2*count}`` (convention B_1 = -1/2)."""
    if count < 0 or count > 40:
        raise DomainError("bernoulli_numbers supports 0 <= count <= 40")
    return list(_bernoulli_table(2 * count))


# B_{2k}/(2k)! for k = 1..15, the Euler-Maclaurin correction weights.
_EM_ORDER = 15
_EM_WEIGHTS = tuple(
    float(_bernoulli_table(2 * _EM_ORDER)[2 * k] / math.factorial(2 * k))
    for k in range(1, _EM_ORDER + 1)
)


def _euler_maclaurin(s: complex, a: float, n_terms: int, regularized: bool = False) -> complex:
    """sum_{k>=0} (k+a)^{-s} by Euler-Maclaurin after ``n_terms`` direct terms.

    With ``regularized`` the pole part 1/(s-1) is removed, leaving an entire
    function of ``s`` (its value at s = 1 is the limit).
    """
    total = 0j
    for k in range(n_terms):
        total += (k + a) ** (-s)
    x = n_terms + a
    x_pow = x ** (-s)
    if regularized:
        # (x^{1-s} - 1)/(s-1), finite at s = 1
        w = (1.0 - s) * math.log(x)
        total -= math.log(x) * _expm1_over(w)
        total += 0.5 * x_pow
    else:
        total += x * x_pow / (s - 1.0) + 0.5 * x_pow
    # (s)_{2k-1} x^{-s-2k+1}
    rising = s
    x_pow = x_pow / x
    inv_x2 = 1.0 / (x * x)
    for k, weight in enumerate(_EM_WEIGHTS, start=1):
        term = weight * rising * x_pow
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        x_pow *= inv_x2
    return total


def _expm1_over(w: complex) -> complex:
    """(e^w - 1)/w without cancellation for small ``|w|``."""
    if abs(w) >= 1.0:
        return (cmath.exp(w) - 1.0) / w
    total = 1.0 + 0j
    term = 1.0 + 0j
    for k in range(2, 30):
        term *= w / k
        total += term
    return total


def _em_terms(s: complex) -> int:
    return max(20, math.ceil(2.0 * abs(s.imag)))


def riemann_zeta(s: complex) -> complex:
    """Riemann zeta function with analytic continuation.

    Euler-Maclaurin summation for ``Re s >= 0``; the functional equation
    maps ``Re s < 0`` onto the half plane where Euler-Maclaurin has no
    cancellation.
    """
    s = complex(s)
    if s == 1.0:
        raise PoleError("riemann_zeta has a pole at s = 1")
    if s.real < 0.0:
        if s.imag == 0.0 and s.real == math.floor(s.real) and int(s.real) % 2 == 0:
            return 0j
        w = 1.0 - s
        return (2.0 ** s) * (math.pi ** (s - 1.0)) * cmath.sin(0.5 * math.pi * s) * gamma(w) * riemann_zeta(w)
    return _euler_maclaurin(s, 1.0, _em_terms(s))


def _hurwitz_reflected(s: complex, a: float) -> complex:
    # zeta(s, a) = 2 Gamma(1-s) (2 pi)^{s-1} sum_n cos(pi(1-s)/2 - 2 pi n a) n^{s-1}
    w = 1.0 - s
    phase = 0.5 * math.pi * w
    # |cos(phase - x)| <= cosh(Im phase) for real x
    scale = math.cosh(phase.imag)
    total = 0j
    n = 1
    while True:
        total += cmath.cos(phase - 2.0 * math.pi * n * a) * n ** (-w)
        if n > 4 and scale * n ** (-w.real) < 1e-17 * abs(total):
            break
        n += 1
    return 2.0 * gamma(w) * (2.0 * math.pi) ** (-w) * total


def _hurwitz_any(s: complex, a: float, regularized: bool = False) -> complex:
    """Hurwitz zeta for any ``a > 0`` (no domain check on ``a``).

    ``regularized`` drops the 1/(s-1) pole part, see :func:`_euler_maclaurin`.
    """
    if s.real < -3.0 and a <= 1.0:
        value = _hurwitz_reflected(s, a)
        return value - 1.0 / (s - 1.0) if regularized else value
    return _euler_maclaurin(s, a, _em_terms(s), regularized)


def hurwitz_zeta(s: complex, a: float) -> complex:
    """Hurwitz zeta ``sum_{k>=0} (k+a)^{-s}`` for ``0 < a <= 1``.

    Raises
    ------
    PoleError
        At ``s = 1``.
    DomainError
        If ``a`` is outside ``(0, 1]``.
    """
    s = complex(s)
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise DomainError("hurwitz_zeta requires 0 < a <= 1")
    if s == 1.0:
        raise PoleError("hurwitz_zeta has a pole at s = 1")
    if a == 1.0:
        return riemann_zeta(s)
    return _hurwitz_any(s, a)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character given by its value table on residues mod ``modulus``.

    ``values[k]`` is chi(k) for ``k = 0 .. modulus-1``. Use :meth:`from_values`
    to build one from a table with the flags computed and the table validated.
    """

    modulus: int
    values: tuple[complex, ...]
    even: bool
    primitive: bool

    def __call__(self, k: int) -> complex:
        return self.values[k % self.modulus]

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus,
            tuple(v.conjugate() for v in self.values),
            self.even,
            self.primitive,
        )

    @property
    def principal(self) -> bool:
        return all(v == 0 or abs(v - 1.0) < 1e-12 for v in self.values)

    @classmethod
    def from_values(cls, modulus: int, values: Sequence[complex], tol: float = 1e-12) -> "DirichletCharacter":
        """Validate a value table and derive the parity and primitivity flags."""
        m = int(modulus)
        vals = tuple(complex(v) for v in values)
        if m < 1 or len(vals) != m:
            raise DomainError("character table must have exactly `modulus` entries")
        if m == 1:
            return cls(1, (1 + 0j,), True, True)
        for k, v in enumerate(vals):
            unit = math.gcd(k, m) == 1
            if unit and abs(abs(v) - 1.0) > tol:
                raise DomainError(f"|chi({k})| must be 1")
            if not unit and v != 0:
                raise DomainError(f"chi({k}) must vanish since gcd({k}, {m}) > 1")
        for a in range(m):
            for b in range(m):
                if abs(vals[a * b % m] - vals[a] * vals[b]) > tol:
                    raise DomainError("character table is not completely multiplicative")
        even = abs(vals[m - 1] - 1.0) < tol
        return cls(m, vals, even, _is_primitive(m, vals, tol))


def _is_primitive(m: int, vals: tuple[complex, ...], tol: float) -> bool:
    # chi is induced from a proper divisor d iff chi(a) = 1 for every unit a = 1 mod d
    for d in range(1, m):
        if m % d:
            continue
        if all(abs(vals[a] - 1.0) < tol for a in range(1, m, d) if math.gcd(a, m) == 1):
            return False
    return True


def _least_primitive_root(p: int) -> int:
    phi = p - 1
    factors = {f for f in range(2, phi + 1) if phi % f == 0 and is_prime(f)}
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable for prime p")


def make_character(m: int, j: int) -> DirichletCharacter:
    """The character with chi(g^a) = exp(2 pi i j a / (m-1)), g the least primitive root mod the prime ``m``."""
    if m < 3 or not is_prime(m):
        raise DomainError("make_character needs a prime modulus m >= 3; pass a value table for other moduli")
    if not 0 <= j <= m - 2:
        raise DomainError(f"character index must lie in [0, {m - 2}]")
    g = _least_primitive_root(m)
    vals = [0j] * m
    power = 1
    for a in range(m - 1):
        # exact values at the real points keep quadratic characters exactly real
        num = (j * a) % (m - 1)
        if num == 0:
            v = 1 + 0j
        elif 2 * num == m - 1:
            v = -1 + 0j
        else:
            v = cmath.exp(2j * math.pi * num / (m - 1))
        vals[power] = v
        power = power * g % m
    return DirichletCharacter(m, tuple(vals), j % 2 == 0, j != 0)


def dirichlet_L(s: complex, chi: DirichletCharacter) -> complex:
    """L(s, chi) = m^{-s} sum_a chi(a) zeta(s, a/m)."""
    s = complex(s)
    m = chi.modulus
    if s == 1.0 and chi.principal:
        raise PoleError("L(s, chi) has a pole at s = 1 for principal chi")
    if m == 1:
        return riemann_zeta(s)
    # for non-principal chi the pole parts cancel since sum chi(a) = 0
    regularized = not chi.principal
    total = 0j
    for a in range(1, m + 1):
        v = chi(a)
        if v != 0:
            total += v * _hurwitz_any(s, a / m, regularized)
    return m ** (-s) * total
