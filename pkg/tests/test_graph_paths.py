import pytest
from hypothesis import given
from hypothesis import strategies as st

from kamienny.graph_paths import (
    BACKWARD,
    FORWARD,
    NotADependency,
    build_chemin_A,
    build_chemin_B,
    find_meeting,
    length_bounds,
    verify_elimination,
)
from kamienny.hecke import one_over, sigma_r_support
from kamienny.independence import max_independent_d, rank_mod_m
from kamienny.modular_symbols import solve_membership
from kamienny.projective_line import P1Point, PrimePowerLevel, act, canonicalize
from kamienny.graph_paths import dependency_vector

GRID = [3**5, 3**6, 5**4, 7**3, 2**9, 2**10]


def lv(q):
    return PrimePowerLevel.from_q(q)


@pytest.mark.parametrize("q", GRID)
def test_walks_avoid_support(q):
    L = lv(q)
    for D in range(1, 5):
        for r in range(1, D + 1):
            S = sigma_r_support(r, L)
            for rec in (build_chemin_A(L, r, D), build_chemin_B(L, r, D)):
                assert not set(rec.visited) & S
                if rec.blocked_at is not None:
                    assert rec.blocked_at in S
                # interval residues are consecutive in the walk direction
                step = -1 if rec.step == BACKWARD else 1
                assert all((b - a) % q == step % q for a, b in zip(rec.interval, rec.interval[1:]))


def test_chemin_starts():
    L = lv(243)
    A = build_chemin_A(L, 2, 2)
    assert A.start == canonicalize(-3, 1, L) == act(one_over(2, L), "tt", L)
    B = build_chemin_B(L, 2, 2)
    assert B.start == one_over(2, L) and B.step == BACKWARD
    Bp = build_chemin_B(L, 3, 3)
    assert Bp.step == FORWARD
    assert Bp.start == canonicalize(3, 2, L) == act(one_over(3, L), "stts", L)
    assert Bp.start.is_affine


def test_chemin_A_for_r_1_stops_at_zero():
    L = lv(243)
    A = build_chemin_A(L, 1, 1)
    assert A.blocked_at == P1Point.affine(0)
    assert A.interval[0] == 241 and A.interval[-1] == 1


@given(st.sampled_from([25, 27, 49, 243]), st.integers(2, 30))
def test_chemin_B_prime_identity(q, r):
    L = lv(q)
    if r % L.p:
        return
    assert act(one_over(r, L), "stts", L) == canonicalize(r, r - 1, L)


def test_length_bounds_values():
    assert length_bounds(lv(243), 2) == (243 / 2 - 4, 243 / 4 - 2)


def test_meeting_is_inverse_pair():
    L = lv(3**6)
    for r in range(2, 5):
        m = find_meeting(L, r, 4)
        assert m is not None
        assert (m.y * m.z + 1) % L.q == 0
        assert m.y_sigma_is_z


def test_verify_zero_vector(pres):
    v = verify_elimination(pres(25), 3, [0, 0, 0], 2)
    assert v.forced and v.lambda_r == 0


def test_verify_rejects_non_dependency(pres):
    with pytest.raises(NotADependency):
        verify_elimination(pres(25), 1, [1], 2)


def _padded_witnesses(P, ms=(2, 3, 5, 7)):
    for m in ms:
        d = max_independent_d(P, "single-m", m) + 1
        if d > P.rank:
            continue
        _, w = rank_mod_m(P, d, m)
        for extra in range(4):
            yield m, w + [0] * extra


@pytest.mark.parametrize("q", [25, 49, 121, 169, 243])
def test_verify_never_claims_nonzero(q, pres):
    P = pres(q)
    for m, lam in _padded_witnesses(P):
        v = verify_elimination(P, len(lam), lam, m)
        if v.forced:
            assert lam[-1] % m == 0
            assert v.meeting is not None and v.meeting.y_sigma_is_z
        else:
            assert v.verdict == "argument inconclusive at this level"


def test_verify_forced_instance(pres):
    v = verify_elimination(pres(25), 3, [1, 1, 0], 2)
    assert v.forced and v.meeting is not None
    assert any(line.startswith("lambda_r = ") for line in v.trace)


def test_alpha_beta_constant_on_usable_prefix(pres):
    """On the part of chemin A where mu = 0, alpha = beta takes one value."""
    P = pres(25)
    L = P.level
    lam, m, r = [1, 1, 0], 2, 3
    v = dependency_vector(L, lam, m)
    alpha, beta = solve_membership(v, P, m)
    A = build_chemin_A(L, r, r)
    vals = set()
    for x in A.visited:
        if (alpha[x] - beta[x]) % m:
            break
        vals |= {alpha[x], beta[x]}
    assert len(vals) == 1
