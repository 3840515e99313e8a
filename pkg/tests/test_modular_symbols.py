import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import relative_homology_rank
from kamienny.modular_symbols import (
    CACHE_FORMAT_VERSION,
    NotInKernel,
    PresentationCache,
    SymbolVector,
    build_presentation,
    is_invariant,
    load_presentation,
    save_presentation,
)
from kamienny.projective_line import PrimePowerLevel, act, enumerate_points

RANK_LEVELS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 49, 64, 81, 121, 125, 128]


@pytest.mark.parametrize("q", RANK_LEVELS)
def test_rank_matches_genus_cusp_oracle(q, pres):
    assert pres(q).rank == relative_homology_rank(q)


@pytest.mark.parametrize("q,rank", [(11, 3), (27, 7), (25, 5)])
def test_rank_examples(q, rank, pres):
    assert pres(q).rank == rank


@pytest.mark.parametrize("q", [8, 9, 11, 25, 27, 32])
def test_relations_reduce_to_zero(q, pres):
    P = pres(q)
    L = P.level
    for x in enumerate_points(L):
        s = SymbolVector(L, {x: 1}) + SymbolVector(L, {act(x, "s", L): 1})
        t = SymbolVector(L, {x: 1}) + SymbolVector(L, {act(x, "t", L): 1}) + SymbolVector(L, {act(x, "tt", L): 1})
        assert P.reduce(s).is_zero()
        assert P.reduce(t).is_zero()
        if act(x, "s", L) == x:
            assert P.xi_class(x).is_zero()


def test_presentation_invariants(pres):
    P = pres(27)
    assert P.rank == P.level.size - P.relation_rank
    assert all(d == 1 for d in P.elementary_divisors)
    assert len(P.sigma_orbits) + len(P.tau_orbits) == len(P.relation_matrix)
    assert P.reduce(SymbolVector(P.level)).is_zero()


@given(st.sampled_from([9, 11, 25, 27]), st.data())
def test_reduce_is_linear(q, data):
    L = PrimePowerLevel.from_q(q)
    coeffs = st.lists(st.integers(-5, 5), min_size=L.size, max_size=L.size)
    va = SymbolVector.from_array(L, data.draw(coeffs))
    vb = SymbolVector.from_array(L, data.draw(coeffs))
    P = build_presentation(L)
    assert P.reduce(va + vb) == P.reduce(va) + P.reduce(vb)
    assert P.reduce(va * 3) == P.reduce(va) * 3
    assert P.reduce(va).coordinates == P.reduce(va.to_array()).coordinates


def _random_relation(P, rng, modulus=None):
    L = P.level
    v = SymbolVector(L)
    for orb in P.sigma_orbits:
        c = rng.integers(-3, 4)
        v = v + SymbolVector(L, {enumerate_points(L)[i]: int(c) for i in orb})
    for orb in P.tau_orbits:
        c = rng.integers(-3, 4)
        v = v - SymbolVector(L, {enumerate_points(L)[i]: int(c) for i in orb})
    return v.mod(modulus) if modulus else v


@pytest.mark.parametrize("q", [9, 11, 25, 27, 49])
@pytest.mark.parametrize("modulus", [None, 2, 5])
def test_solve_membership_postconditions(q, modulus, pres):
    P = pres(q)
    rng = np.random.default_rng(q)
    for _ in range(5):
        v = _random_relation(P, rng, modulus)
        alpha, beta = P.solve_membership(v, modulus)
        diff = (alpha - beta).mod(modulus) if modulus else alpha - beta
        assert diff.coeffs == (v.mod(modulus) if modulus else v).coeffs
        assert is_invariant(alpha, "s", modulus)
        assert is_invariant(beta, "t", modulus)


def test_solve_membership_examples(pres):
    P = pres(25)
    L = P.level
    x = enumerate_points(L)[3]
    y = enumerate_points(L)[7]
    sx = SymbolVector(L, {x: 1}) + SymbolVector(L, {act(x, "s", L): 1})
    ty = SymbolVector(L, {y: 1}) + SymbolVector(L, {act(y, "t", L): 1}) + SymbolVector(L, {act(y, "tt", L): 1})
    a, b = P.solve_membership(sx)
    assert a - b == sx and is_invariant(a, "s") and is_invariant(b, "t")
    a, b = P.solve_membership(-ty)
    assert a - b == -ty
    a, b = P.solve_membership(sx - ty)
    assert a - b == sx - ty


def test_solve_membership_rejects_non_relation(pres):
    P = pres(11)
    v = SymbolVector(P.level, {enumerate_points(P.level)[0]: 1})
    assert not P.reduce(v).is_zero()
    with pytest.raises(NotInKernel):
        P.solve_membership(v)


def test_cache_round_trip(tmp_path):
    L = PrimePowerLevel(5, 2)
    cache = PresentationCache(tmp_path)
    fresh = cache.get(L)
    assert (cache.hits, cache.misses) == (0, 1)
    path = cache.path_for(L)
    data = json.loads(path.read_text())
    assert data["format_version"] == CACHE_FORMAT_VERSION
    assert data["rank"] == fresh.rank
    again = PresentationCache(tmp_path)
    warm = again.get(L)
    assert (again.hits, again.misses) == (1, 0)
    assert warm.basis == fresh.basis
    assert np.array_equal(np.asarray(warm.projection), np.asarray(fresh.projection))
    assert [e["file"] for e in again.entries()] == [path.name]


def test_stale_cache_is_rebuilt(tmp_path):
    L = PrimePowerLevel(3, 2)
    P = build_presentation(L)
    path = tmp_path / "x.json"
    save_presentation(P, path)
    data = json.loads(path.read_text())
    data["format_version"] = CACHE_FORMAT_VERSION + 1
    path.write_text(json.dumps(data))
    assert load_presentation(path, L) is None
    path.write_text("{not json")
    assert load_presentation(path, L) is None
    save_presentation(P, path)
    assert load_presentation(path, PrimePowerLevel(3, 3)) is None


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("KAMIENNY_CACHE", str(tmp_path))
    cache = PresentationCache()
    cache.get(PrimePowerLevel(2, 3))
    assert cache.directory == tmp_path
    assert list(tmp_path.glob("presentation_p2_n3.json"))
