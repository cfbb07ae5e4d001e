import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from speczeta.errors import ConvergenceError, DomainError, StripError
from speczeta.heat import (
    PAdicAbs,
    circle_heat_kernel_periodized,
    circle_heat_kernel_spectral,
    combine_traces,
    heat_trace_circle,
    heat_trace_Z,
    heat_trace_Zd,
    padic_heat_kernel_series,
    padic_heat_kernel_shell,
)
from speczeta.mellin import QuadratureSpec, determinant, integrate_adaptive, mellin_zeta, zeta_prime_at_zero
from speczeta.zetas import zeta_circle, zeta_Z

ZETA_Z_ORACLE = {
    0.25: 1.1803405990160962,
    0.1 + 2j: -0.15285519423211516 - 0.31286116262699515j,
    0.4 - 1j: 0.2848039078346441 + 0.1635966968303828j,
}


def test_z_trace_values():
    tr = heat_trace_Z()
    for t in (0.01, 1.0, 50.0):
        assert abs(tr(t) - float(mp.besseli(0, 2 * t) * mp.exp(-2 * t))) < 1e-15
    # large-t expansion is accurate to O(t^{-3.5})
    assert abs(tr(1e4) - tr.tail(1e4)) < 1e-13


def test_zd_trace_is_power():
    t = 0.7
    assert abs(heat_trace_Zd(3)(t) - heat_trace_Z()(t) ** 3) < 1e-15
    with pytest.raises(DomainError):
        heat_trace_Zd(0)


def test_circle_trace_remainder_small():
    tr = heat_trace_circle()
    # image terms n != 0 of the periodized kernel at x = 0
    for t in (1e-4, 0.01, 0.05):
        expected = 2.0 * sum(math.exp(-n * n / (4.0 * t)) for n in (1, 2, 3)) / math.sqrt(4.0 * math.pi * t)
        assert abs(tr.remainder(t) - expected) <= 1e-12 * expected + 1e-300


def test_combine_traces_tail_rule():
    tr = combine_traces([heat_trace_Z(), heat_trace_Zd(3)], [1.0, 2.0])
    t = 2.0
    assert abs(tr(t) - (heat_trace_Z()(t) + 2 * heat_trace_Zd(3)(t))) < 1e-15
    with pytest.raises(DomainError):
        combine_traces([heat_trace_Z(), heat_trace_Zd(2)], [1.0, 1.0])


@pytest.mark.parametrize("t,x", [(0.05, 0.0), (1.0, 0.5), (0.001, 0.3), (0.2, 0.9)])
def test_poisson_pointwise(t, x):
    assert abs(circle_heat_kernel_spectral(t, x) - circle_heat_kernel_periodized(t, x)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.floats(0.001, 2.0), st.floats(-3.0, 3.0))
def test_circle_kernel_periodic(t, x):
    assert abs(circle_heat_kernel_periodized(t, x) - circle_heat_kernel_periodized(t, x + 1.0)) < 1e-12


@pytest.mark.parametrize("p", [2, 3, 5])
def test_padic_shell_mass_and_origin(p):
    # the kernel integrates to 1: Haar mass of |x| = p^{-v} shells is (1 - 1/p) p^{-v}
    t = 0.05
    mass = padic_heat_kernel_shell(p, None, t) * 0.0
    for v in range(-40, 60):
        mass += padic_heat_kernel_shell(p, PAdicAbs(p, v), t) * (1 - 1 / p) * float(p) ** (-v)
    assert abs(mass - 1.0) < 1e-12
    assert padic_heat_kernel_shell(p, None, t) > padic_heat_kernel_shell(p, PAdicAbs(p, 0), t)


def test_padic_series_envelope_errors():
    with pytest.raises(ConvergenceError):
        padic_heat_kernel_series(2, PAdicAbs(2, 0), 0.5)
    with pytest.raises(DomainError):
        padic_heat_kernel_series(2, None, 0.01)
    with pytest.raises(DomainError):
        PAdicAbs(4, 0)


def test_integrate_adaptive_singular_endpoint():
    assert abs(integrate_adaptive(lambda x: x**-0.5, 0.0, 1.0, 1e-10) - 2.0) < 1e-8
    assert abs(integrate_adaptive(math.sin, 0.0, math.pi, 1e-13) - 2.0) < 1e-13
    with pytest.raises(DomainError):
        integrate_adaptive(math.sin, 1.0, 0.0, 1e-8)


def test_integrate_adaptive_below_rounding_floor_returns():
    # a tolerance far below double precision still terminates
    assert abs(integrate_adaptive(math.exp, 0.0, 1.0, 1e-30) - (math.e - 1)) < 1e-15


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(tolerance=0)
    with pytest.raises(DomainError):
        QuadratureSpec(tail_terms=4)
    with pytest.raises(DomainError):
        QuadratureSpec(split_point=10, far_point=5)


@pytest.mark.parametrize("s,expected", list(ZETA_Z_ORACLE.items()))
def test_mellin_Z_frozen(s, expected):
    assert abs(mellin_zeta(heat_trace_Z(), s) - expected) < 1e-10


def test_mellin_strip_enforced():
    with pytest.raises(StripError):
        mellin_zeta(heat_trace_Z(), 0.5)
    with pytest.raises(StripError):
        mellin_zeta(heat_trace_Z(), -0.1)


@pytest.mark.parametrize("s", [0.3, 0.7, 1.3 + 2j])
def test_mellin_circle(s):
    assert abs(mellin_zeta(heat_trace_circle(), s) - zeta_circle(s)) < 1e-11


def test_mellin_tail_terms_matter_little():
    a = mellin_zeta(heat_trace_Z(), 0.25, QuadratureSpec(tail_terms=3))
    b = mellin_zeta(heat_trace_Z(), 0.25, QuadratureSpec(tail_terms=1))
    assert abs(a - zeta_Z(0.25)) < abs(b - zeta_Z(0.25)) + 1e-12
    assert abs(b - zeta_Z(0.25)) < 1e-5


def test_determinant():
    vals = [1.0, 2.0, 3.5]
    assert abs(determinant(vals) - 7.0) < 1e-14
    assert zeta_prime_at_zero([1.0]) == 0.0
    with pytest.raises(DomainError):
        zeta_prime_at_zero([0.0, 1.0])
