import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF, factorint
from sympy.polys.matrices import DomainMatrix

from kamienny.hecke import hecke_class
from kamienny.independence import (
    check,
    coordinate_matrix,
    criterion_verdict,
    independent_all_m,
    max_independent_d,
    rank_mod_m,
)
from kamienny.linalg import elementary_divisors

PRIMES = [2, 3, 5, 7, 11, 13]


def gf_rank(rows, m):
    return DomainMatrix([[GF(m)(v) for v in r] for r in rows], (len(rows), len(rows[0])), GF(m)).rank()


@pytest.mark.parametrize("q", [11, 25, 27, 32, 49])
def test_first_image_is_independent(q, pres):
    for m in PRIMES:
        assert rank_mod_m(pres(q), 1, m)[0] == 1


def test_pigeonhole(pres):
    P = pres(27)
    rep = check(P, P.rank + 1, "single-m", 2)
    assert not rep.independent and "pigeonhole" in rep.reason


def test_level_11_cross_check(pres):
    P = pres(11)
    rank, _ = rank_mod_m(P, 3, 2)
    ok, divs = independent_all_m(P, 3)
    assert rank == gf_rank(coordinate_matrix(P, 3), 2)
    if ok:
        assert rank == 3
    assert len(divs) == 3


def test_primitive_and_even_vectors():
    assert elementary_divisors([[3, 5, 0]]) == [1]
    assert elementary_divisors([[2, 4, 10]]) == [2]


@pytest.mark.parametrize("q", [25, 27, 32, 49])
def test_all_m_equivalent_to_every_m(q, pres):
    P = pres(q)
    for d in range(1, P.rank + 1):
        ok, divs = independent_all_m(P, d)
        ranks = {m: rank_mod_m(P, d, m)[0] for m in PRIMES + [17, 19, 23, 29, 31, 37, 41, 43, 47]}
        if ok:
            assert all(r == d for r in ranks.values())
        else:
            bad = [e for e in divs if e != 1]
            e = bad[0]
            if e == 0:
                assert all(r < d for r in ranks.values())
            else:
                m = min(factorint(e))
                assert rank_mod_m(P, d, m)[0] < d


@pytest.mark.parametrize("q", [25, 27, 32, 49, 121, 125])
def test_rank_matches_domain_matrix_oracle(q, pres):
    P = pres(q)
    for m in (2, 3, 5):
        for d in range(1, min(P.rank, 12) + 1):
            assert rank_mod_m(P, d, m)[0] == gf_rank(coordinate_matrix(P, d), m)


@pytest.mark.parametrize("q", [25, 27, 49, 121])
def test_witnesses_are_dependencies(q, pres):
    P = pres(q)
    for m in (2, 3, 5, 7):
        d = max_independent_d(P, "single-m", m) + 1
        if d > P.rank:
            continue
        _, w = rank_mod_m(P, d, m)
        assert w is not None and any(x % m for x in w)
        total = None
        for i, lam in enumerate(w, start=1):
            c = hecke_class(i, P) * lam
            total = c if total is None else total + c
        assert total.is_zero(m)


@pytest.mark.parametrize("q", [25, 49, 121, 169])
def test_prefix_monotone_and_bounded(q, pres):
    P = pres(q)
    for m in (2, 3):
        verdicts = [check(P, d, "single-m", m).independent for d in range(1, P.rank + 2)]
        first_false = verdicts.index(False)
        assert not any(verdicts[first_false:])
        assert max_independent_d(P, "single-m", m) == first_false <= P.rank
        assert max_independent_d(P, "all-m") <= max_independent_d(P, "single-m", m)


@given(st.sampled_from([25, 27, 49]), st.integers(1, 10**6), st.sampled_from([3, 5, 7]))
def test_scaling_invariance(q, seed, m):
    from conftest import presentation

    P = presentation(q)
    rows = coordinate_matrix(P, min(P.rank, 4))
    i = seed % len(rows)
    unit = 1 + seed % (m - 1)
    scaled = [r[:] for r in rows]
    scaled[i] = [unit * x for x in scaled[i]]
    assert gf_rank(rows, m) == gf_rank(scaled, m)
    from kamienny.linalg import rank_mod_prime

    assert rank_mod_prime(rows, m)[0] == rank_mod_prime(scaled, m)[0]


@pytest.mark.parametrize("q,d,tested", [(25, 1, 2), (32, 1, 3), (27, 2, 4)])
def test_criterion_counts(q, d, tested, pres):
    rep = criterion_verdict(pres(q), d, "all-m")
    assert rep.extra["images_tested"] == tested == rep.d
    assert rep.extra["above_threshold"] is False


def test_max_d_at_27(pres):
    assert max_independent_d(pres(27), "all-m") <= 7
