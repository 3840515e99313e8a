import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import eta_product_coefficients, hecke_family
from kamienny.hecke import (
    HeckeMatrix,
    hecke_class,
    hecke_image,
    hecke_matrices,
    one_over,
    sigma_r_support,
)
from kamienny.modular_symbols import SymbolVector
from kamienny.projective_line import P1Point, PrimePowerLevel, canonicalize


def lv(q):
    return PrimePowerLevel.from_q(q)


def test_small_families():
    assert [m.as_tuple() for m in hecke_matrices(1)] == [(1, 0, 0, 1)]
    assert sorted(m.as_tuple() for m in hecke_matrices(2)) == sorted(
        [(2, 0, 0, 1), (2, 1, 0, 1), (1, 0, 0, 2), (1, 0, 1, 2)]
    )


@pytest.mark.parametrize("r", range(1, 13))
def test_family_matches_exhaustive_search(r):
    got = hecke_matrices(r)
    assert sorted(m.as_tuple() for m in got) == sorted(hecke_family(r))
    assert list(got) == sorted(got)  # lexicographic in (t, w, u, v)
    for m in got:
        assert m.det == r and m.u + m.t - 1 <= r


def test_image_examples():
    L = lv(9)
    assert hecke_image(1, L) == SymbolVector(L, {P1Point.affine(0): 1})
    # (w, t) = (0,1), (0,1), (0,2) ~ (0,1), (1,2) ~ (5,1)
    assert hecke_image(2, L) == SymbolVector(L, {P1Point.affine(0): 3, P1Point.affine(5): 1})


@pytest.mark.parametrize("q,r", [(9, 3), (9, 6), (25, 5), (8, 4), (27, 9)])
def test_side_condition_drops_terms(q, r):
    L = lv(q)
    kept = [m for m in hecke_matrices(r) if math.gcd(m.w, m.t, L.p) == 1]
    assert sum(hecke_image(r, L).coeffs.values()) == len(kept) < len(hecke_matrices(r))


@pytest.mark.parametrize("q", [11, 25, 27, 49])
def test_class_of_zero_infinity_is_nonzero(q, pres):
    assert not hecke_class(1, pres(q)).is_zero()


def _combo(pres, terms):
    out = None
    for coef, r in terms:
        c = hecke_class(r, pres) * coef
        out = c if out is None else out + c
    return out


def test_level_11_eigen_relations(pres):
    """Eisenstein eigenvalue l + 1 and cusp eigenvalue a_l from the eta product."""
    P = pres(11)
    a = eta_product_coefficients(11, 12)
    a2, a3 = a[2], a[3]
    assert (a2, a3) == (-2, -1)
    e2, e3 = 3, 4
    # T2^2 = T4 + 2 T1 and T2^3 = T8 + 4 T2 away from 11, so
    # (T2 - e2)(T2 - a2)^2 = T8 + (-e2 - 2 a2) T4 + ... expanded on T1, T2, T4, T8
    c2, c1, c0 = -(e2 + 2 * a2), 2 * e2 * a2 + a2 * a2, -e2 * a2 * a2
    # x^3 + c2 x^2 + c1 x + c0 with x^3 -> T8 + 4 T2, x^2 -> T4 + 2 T1
    cubic = _combo(P, [(1, 8), (4 + c1, 2), (c2, 4), (2 * c2 + c0, 1)])
    assert cubic.is_zero()
    assert cubic == _combo(P, [(1, 8), (1, 4), (-4, 2), (-10, 1)])
    # T2 is semisimple here, so already (T2 - e2)(T2 - a2) kills {0, oo}
    assert _combo(P, [(1, 4), (-(e2 + a2), 2), (2 + e2 * a2, 1)]).is_zero()
    # (T3 - e3)(T3 - a3), with T3^2 = T9 + 3 T1
    assert _combo(P, [(1, 9), (-(e3 + a3), 3), (3 + e3 * a3, 1)]).is_zero()
    # T6 = T2 T3 lies on the line through the two eigen-characters
    slope = (e2 * e3 - a2 * a3) // (e2 - a2)
    assert _combo(P, [(1, 6), (-slope, 2), (-(e2 * e3 - slope * e2), 1)]).is_zero()


def test_sigma_r_support_examples():
    for q in (9, 25, 27):
        L = lv(q)
        assert sigma_r_support(1, L) == {P1Point.affine(0)}
        for r in range(1, 8):
            S = sigma_r_support(r, L)
            assert one_over(r, L) not in S
            for k in range(1, r + 1):
                assert hecke_image(k, L).support() <= S | {one_over(r, L)}


@given(st.sampled_from([25, 27, 49, 121, 125, 169, 243]), st.integers(2, 12), st.randoms())
def test_coefficient_isolation_when_q_exceeds_r_squared(q, r, rnd):
    L = lv(q)
    if q <= r * r:
        return
    lam = [rnd.randint(-9, 9) for _ in range(r)]
    v = SymbolVector(L)
    for i, c in enumerate(lam, start=1):
        v = v + hecke_image(i, L) * c
    assert v[one_over(r, L)] == lam[-1]


def test_coefficient_isolation_exceptions():
    """Outside q > r^2, r >= 2 the point (1, r) picks up other terms."""
    for q in (25, 27, 49, 121):
        assert hecke_image(1, lv(q))[one_over(1, lv(q))] == 0
    L = lv(25)
    assert hecke_image(7, L)[one_over(8, L)] == 1
    L = lv(27)
    # (1, 9), (4, 9), (7, 9) are one point
    assert hecke_image(9, L)[one_over(9, L)] == 3


def test_hecke_matrix_order():
    ms = hecke_matrices(6)
    assert ms[0] == HeckeMatrix(1, 0, 6, 0)
    r = random.Random(3)
    for m in r.sample(list(ms), 4):
        assert canonicalize(m.w, m.t, lv(49)) in hecke_image(6, lv(49)).support()
