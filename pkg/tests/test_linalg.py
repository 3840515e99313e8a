from hypothesis import given
from hypothesis import strategies as st
from sympy import GF, Matrix
from sympy.polys.matrices import DomainMatrix

from kamienny.linalg import elementary_divisors, hermite_form, rank_mod_prime

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@given(matrices())
def test_hermite_rank_and_rowspace(rows):
    ncols = len(rows[0])
    ech = hermite_form([{j: v for j, v in enumerate(r) if v} for r in rows], ncols)
    assert ech.rank == Matrix(rows).rank()
    dense = [[row.get(j, 0) for j in range(ncols)] for row in ech.rows]
    if dense:
        # same row space over Q and pivots strictly increase
        assert Matrix(rows + dense).rank() == ech.rank
        assert list(ech.pivots) == sorted(ech.pivots)
        for row, piv in zip(ech.rows, ech.pivots):
            assert min(row) == piv and row[piv] > 0


@given(matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_prime_against_domain_matrix(rows, m):
    rank, witness = rank_mod_prime(rows, m)
    dm = DomainMatrix([[GF(m)(v) for v in r] for r in rows], (len(rows), len(rows[0])), GF(m))
    assert rank == dm.rank()
    if rank < len(rows):
        assert witness is not None and any(w % m for w in witness)
        for j in range(len(rows[0])):
            assert sum(w * r[j] for w, r in zip(witness, rows)) % m == 0
    else:
        assert witness is None


def test_elementary_divisors_examples():
    assert elementary_divisors([[1, 2, 3]]) == [1]
    assert elementary_divisors([[2, 4, 6]]) == [2]
    assert elementary_divisors([[2, 0], [0, 3]]) == [1, 6]
    assert elementary_divisors([[1, 1], [2, 2]]) == [1, 0]
