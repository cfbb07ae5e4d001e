import math
from math import comb

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from speczeta.errors import ConvergenceError, DomainError, PoleError
from speczeta.specialfn import make_character
from speczeta.spectra import cycle_spectrum
from speczeta.zetas import (
    ZetaSpace,
    appell_F1_picard,
    completed_cyclic_L,
    cyclic_L,
    evaluate,
    finite_graph_zeta,
    lauricella_FC,
    tree_measure_moment,
    xi_circle,
    xi_p,
    xi_Z,
    zeta_circle,
    zeta_cycle,
    zeta_p,
    zeta_tree,
    zeta_tree_spectral_measure,
    zeta_Z,
    zeta_Z_binomial,
    zeta_Zd,
)

# frozen oracles: mpmath closed forms, heat-trace quadrature and Kesten-McKay integrals
ZETA_Z = {
    0.25: 1.1803405990160962,
    -1.3 + 0.5j: 2.28785703859331 - 1.3723100555912673j,
    2.2 + 3j: -0.014111189059214609 - 0.0008111775580545009j,
}
CIRCLE = {0.3: -1.2964298638165772, 0.7: 0.47393231845042305, 1.3 + 2j: 0.006909933645968423 - 0.012717949385694703j}
# Z^d: mpmath quadrature to t = 1e4 plus a 12-term analytic tail, 40 digits
ZD = {(2, 0.25): 0.76756597948132239, (2, 0.5): 0.64288224829445775, (3, 0.25): 0.66540647964617722, (3, 0.5): 0.45534405164443013}
TREE = {
    (2, 0.5): 0.7263670907744061,
    (2, 1.0): 2 / 3,
    (2, 2.0): 10 / 9,
    (3, 0.5): 0.5754064631722385,
    (3, 1.0): 3 / 8,
    (3, 2.0): 15 / 64,
}


@pytest.mark.parametrize("s,expected", list(ZETA_Z.items()))
def test_zeta_Z_frozen(s, expected):
    assert abs(zeta_Z(s) - expected) < 1e-12 * max(1, abs(expected))


def test_zeta_Z_integers_and_poles():
    for n in range(1, 5):
        assert zeta_Z(n) == 0
    for n in range(0, 11):
        assert abs(zeta_Z(-n).real - comb(2 * n, n)) < 1e-9
    for h in (0.5, 1.5, 2.5):
        with pytest.raises(PoleError):
            zeta_Z(h)


@settings(max_examples=100, deadline=None)
@given(st.floats(-4, 3), st.floats(-6, 6))
def test_zeta_Z_two_closed_forms_agree(x, y):
    s = complex(x, y)
    if y == 0 and (abs(x - round(x - 0.5) - 0.5) < 1e-3 or x >= 1):
        return
    a, b = zeta_Z(s), zeta_Z_binomial(s)
    assert abs(a - b) <= 1e-11 * max(1, abs(a))


def test_xi_Z_entire_near_odd_integers():
    for k in (1, 3):
        a = xi_Z(k)
        b = xi_Z(k + 1e-6)
        assert abs(a - b) < 1e-4 * max(1, abs(a))
    assert abs(xi_Z(0.5) - xi_Z(0.5)) == 0


@pytest.mark.parametrize("s,expected", list(CIRCLE.items()))
def test_zeta_circle_frozen(s, expected):
    assert abs(zeta_circle(s) - expected) < 1e-13


def test_xi_circle_poles():
    with pytest.raises(PoleError):
        xi_circle(0)
    with pytest.raises(PoleError):
        xi_circle(1)


@pytest.mark.parametrize("n", [2, 3, 7, 10, 50])
def test_cycle_closed_vs_spectrum(n):
    for s in (1.0, 2.0, 0.3 + 1j):
        assert abs(zeta_cycle(n, s) - finite_graph_zeta(cycle_spectrum(n), s)) < 1e-10 * abs(zeta_cycle(n, s))


def test_cycle_special_values():
    assert abs(zeta_cycle(10, 1) - 99 / 12) < 1e-12
    assert abs(zeta_cycle(3, 2) - 2 / 9) < 1e-14


def test_lauricella_reduces_to_gauss():
    # one variable: F_C(a, b; c; x) = 2F1(a, b; c; x)
    val, err = lauricella_FC(0.3, 0.7, [1.2], [0.25])
    assert abs(val - float(mp.hyp2f1(0.3, 0.7, 1.2, 0.25))) < 1e-13
    with pytest.raises(DomainError):
        lauricella_FC(0.3, 0.7, [1.0, 1.0], [0.5, 0.5])


def test_lauricella_divergence_detected():
    with pytest.raises((ConvergenceError, DomainError)):
        lauricella_FC(1.0, 1.0, [1.0], [1.5])


@pytest.mark.parametrize("key,expected", list(ZD.items()))
def test_zeta_Zd_both_routes_frozen(key, expected):
    d, s = key
    assert abs(zeta_Zd(d, s, "mellin") - expected) < 1e-10
    assert abs(zeta_Zd(d, s, "lauricella") - expected) < 1e-8


def test_zeta_Zd_one_is_Z():
    assert abs(zeta_Zd(1, 0.25, "lauricella") - zeta_Z(0.25)) < 1e-9


def test_appell_F1_reduces_to_gauss():
    # F1(a; b1, 0; c; x, y) = 2F1(a, b1; c; x)
    v = appell_F1_picard(1.5, 0.7, 0.0, 3.0, -0.4, 0.2)
    assert abs(v - float(mp.hyp2f1(1.5, 0.7, 3.0, -0.4))) < 1e-12


@pytest.mark.parametrize("key,expected", list(TREE.items()))
def test_tree_frozen(key, expected):
    q, s = key
    assert abs(zeta_tree(q, s) - expected) < 1e-10
    assert abs(zeta_tree_spectral_measure(q, s) - expected) < 1e-10


@pytest.mark.parametrize("q", [2, 3, 5])
def test_tree_measure_moments(q):
    assert abs(tree_measure_moment(q, 0) - 1.0) < 1e-12
    assert abs(tree_measure_moment(q, 1)) < 1e-12
    assert abs(tree_measure_moment(q, 2) - (q + 1)) < 1e-12


def test_zeta_p_values():
    assert zeta_p(2, 1) == 0.5
    assert abs(zeta_p(3, 2) - 2 / 78) < 1e-15
    with pytest.raises(PoleError):
        zeta_p(3, 0.5)
    with pytest.raises(DomainError):
        zeta_p(6, 1)


@pytest.mark.parametrize("p", [2, 3, 7])
def test_xi_p_continuous_at_half(p):
    a = xi_p(p, 0.5)
    b = xi_p(p, 0.5 + 1e-7)
    assert abs(a - b) < 1e-5 * abs(a)
    # s = 1/2 + i pi / log p is a genuine pole
    with pytest.raises(PoleError):
        xi_p(p, complex(0.5, math.pi / math.log(p)))


def test_cyclic_L_against_sum():
    chi = make_character(5, 2)
    n = 3
    s = 0.4 + 2j
    direct = sum(chi(k) * math.sin(math.pi * k / 15) ** (-s) for k in range(1, 15))
    assert abs(cyclic_L(n, s, chi) - direct) < 1e-12
    lam = completed_cyclic_L(n, s, chi)
    assert np.isfinite(lam.real)


def test_space_parse_and_dispatch():
    assert str(ZetaSpace.parse("cycle:10")) == "cycle:10"
    assert ZetaSpace.parse("Z") == ZetaSpace("Z")
    for bad in ("cycle", "cycle:1", "padic:4", "moon", "Zd:x"):
        with pytest.raises(DomainError):
            ZetaSpace.parse(bad)
    assert abs(evaluate(ZetaSpace.parse("cycle:10"), 1) - 8.25) < 1e-12
    assert evaluate(ZetaSpace.parse("padic:2"), 1) == 0.5
    assert abs(evaluate(ZetaSpace("Z"), 0.25, "mellin") - evaluate(ZetaSpace("Z"), 0.25)) < 1e-10
    with pytest.raises(DomainError):
        evaluate(ZetaSpace("padic", 2), 1, "mellin")
