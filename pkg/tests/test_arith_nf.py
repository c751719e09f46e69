import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adelic_perc.arith_nf import (
    QI,
    QQ,
    QSQRT2,
    NFElement,
    abs_nu,
    arch_coordinates,
    dedekind_zeta,
    dperp,
    dperp_array,
    euler_tail_bound,
    lattice_is_transverse,
    padic_expansion,
    product_formula_nf,
    split_prime,
    transversality_check,
    v_nu,
    v_nu_hensel,
    vp_int,
    zero_free_beta0,
)
from adelic_perc.magnitude import ExactMagnitude

CATALAN = 0.915965594177219015


def test_minkowski_coordinates():
    assert arch_coordinates(NFElement(QQ, 5)) == [5]
    assert arch_coordinates(NFElement(QI, 3, 4)) == [complex(3, 4)]
    a, b = arch_coordinates(NFElement(QSQRT2, 1, 2))
    assert a == pytest.approx(3.8284271247, abs=1e-9)
    assert b == pytest.approx(-1.8284271247, abs=1e-9)


def test_split_gaussian_5():
    places = split_prime(QI, 5)
    assert {(P.generator.a, P.generator.b) for P in places} == {(2, 1), (2, -1)}
    assert all(P.f == 1 and P.e == 1 for P in places)


def test_inert_gaussian_7():
    (P,) = split_prime(QI, 7)
    assert P.f == 2 and P.e == 1


def test_ramified_gaussian_2():
    (P,) = split_prime(QI, 2)
    assert P.e == 2 and P.f == 1


@pytest.mark.parametrize("K", [QQ, QI, QSQRT2])
@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 17])
def test_ef_sum(K, p):
    assert sum(P.e * P.f for P in split_prime(K, p)) == K.degree


def test_valuations():
    assert vp_int(18, 3) == 2
    (P2,) = split_prime(QI, 2)
    assert v_nu(NFElement(QI, 2), P2) == 2
    P5 = next(P for P in split_prime(QI, 5) if (P.generator.a, P.generator.b) == (2, 1))
    assert v_nu(NFElement(QI, 5), P5) == 1


def test_absolute_values():
    (P,) = split_prime(QQ, 2)
    assert abs_nu(NFElement(QQ, 12), P) == ExactMagnitude(2, -2)
    (P2,) = split_prime(QI, 2)
    assert abs_nu(NFElement(QI, 1, 1), P2) == ExactMagnitude(2, -1)
    arch = QI.arch_places()[0]
    assert float(abs_nu(NFElement(QI, 3, 4), arch)) == pytest.approx(5.0)


def test_product_formula_examples():
    r = product_formula_nf(NFElement(QQ, 12))
    assert r.nonarch == {2: 2, 3: 1} and r.holds
    r = product_formula_nf(NFElement(QI, 1, 1))
    assert r.nonarch == {2: 1} and r.holds
    for K in (QQ, QI, QSQRT2):
        r = product_formula_nf(NFElement(K, 1))
        assert not r.nonarch and not r.norm


def test_hensel_valuation_agrees():
    for p in (7, 17, 23):
        for P in split_prime(QSQRT2, p):
            if P.hensel_root is None:
                continue
            for a in range(-20, 21):
                for b in range(-20, 21):
                    x = NFElement(QSQRT2, a, b)
                    if not x.is_zero():
                        assert v_nu(x, P) == v_nu_hensel(x, P)


def test_padic_expansions():
    e = padic_expansion(10, 3)
    assert (e.prefix, e.period) == ((1, 0, 1), ())
    e = padic_expansion(-1, 3)
    assert (e.prefix, e.period) == ((), (2,))
    assert e.to_fraction() == -1
    e = padic_expansion(0, 5)
    assert (e.prefix, e.period) == ((), ())


def test_dperp_examples():
    assert dperp(10, 1, 3) == 2
    assert dperp(1, 2, 3) == 0
    assert dperp(-1, 2, 3) == 1


def test_dperp_array_matches_scalar():
    rng = np.random.default_rng(0)
    x = rng.integers(0, 3**8, 300)
    y = rng.integers(0, 3**8, 300)
    keep = x != y
    got = dperp_array(x[keep], y[keep], 3, 8)
    assert list(got) == [dperp(int(a), int(b), 3) for a, b in zip(x[keep], y[keep])]


def test_zeta_q():
    assert abs(dedekind_zeta(QQ, 2, pmax=10**5) - math.pi**2 / 6) < 1e-4


def test_zeta_gaussian():
    want = math.pi**2 / 6 * CATALAN
    assert want == pytest.approx(1.50670, abs=1e-5)
    assert abs(dedekind_zeta(QI, 2, pmax=10**5) - want) < 1e-3
    assert dedekind_zeta(QI, 2, mode="closed") == pytest.approx(want, rel=1e-10)


def test_zeta_all_removed():
    removed = [P for p in (2, 3, 5, 7) for P in split_prime(QI, p)]
    assert dedekind_zeta(QI, 2, pmax=7, removed=removed) == 1.0


def test_tail_bound_covers_truncation():
    err = abs(dedekind_zeta(QQ, 2, pmax=1000) - math.pi**2 / 6) / (math.pi**2 / 6)
    assert err <= euler_tail_bound(QQ, 2, 1000)


def test_zero_free_beta0():
    assert zero_free_beta0(QI) == pytest.approx(1 - 1 / (12.74 * math.log(4)), abs=1e-12)
    assert zero_free_beta0(QI) == pytest.approx(0.94338, abs=1e-5)
    assert zero_free_beta0(QSQRT2) == pytest.approx(0.96225, abs=1e-5)
    assert zero_free_beta0(QQ) is None


def test_transversality():
    assert transversality_check(QSQRT2, 50)
    assert transversality_check(QI, 50)
    assert not lattice_is_transverse(lambda a, b: (a, b), 5)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([QQ, QI, QSQRT2]), st.integers(-200, 200), st.integers(-200, 200))
def test_product_formula_property(K, a, b):
    x = NFElement(K, a, 0 if K is QQ else b)
    if not x.is_zero():
        assert product_formula_nf(x).holds


@settings(max_examples=300, deadline=None)
@given(st.integers(-(10**6), 10**6), st.sampled_from([2, 3, 5, 7]))
def test_padic_roundtrip(n, p):
    assert padic_expansion(n, p).to_fraction() == Fraction(n)
