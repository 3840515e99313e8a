"""Linear independence of T_1{0,oo}, ..., T_d{0,oo} in H_1(X_0(p^n), cusps) (x) F_m."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Literal

from sympy import isprime

from .bounds import prop5_threshold, s_choice
from .hecke import hecke_class
from .linalg import elementary_divisors, rank_mod_prime
from .modular_symbols import HomologyPresentation

Mode = Literal["single-m", "all-m"]


@dataclass
class IndependenceReport:
    p: int
    n: int
    d: int
    mode: str
    independent: bool
    m: int | None = None
    rank: int | None = None
    elementary_divisors: list[int] | None = None
    witness: list[int] | None = None
    reason: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def coordinate_matrix(pres: HomologyPresentation, d: int) -> list[list[int]]:
    return [list(hecke_class(i, pres).coordinates) for i in range(1, d + 1)]


def rank_mod_m(pres: HomologyPresentation, d: int, m: int) -> tuple[int, list[int] | None]:
    """F_m-rank of the first d images and, if dependent, the first kernel vector."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if not isprime(m):
        raise ValueError(f"m={m} is not prime")
    return rank_mod_prime(coordinate_matrix(pres, d), m)


def independent_all_m(pres: HomologyPresentation, d: int) -> tuple[bool, list[int]]:
    """True iff the d images span a rank-d direct summand (all Smith invariants 1)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    mat = coordinate_matrix(pres, d)
    if pres.rank == 0:
        return False, [0] * min(d, 1)
    divs = elementary_divisors(mat)
    return len(divs) == d and all(x == 1 for x in divs), divs


def check(pres: HomologyPresentation, d: int, mode: Mode = "all-m", m: int | None = None) -> IndependenceReport:
    lv = pres.level
    if d > pres.rank:
        return IndependenceReport(lv.p, lv.n, d, mode, False, m=m, reason="pigeonhole: d exceeds quotient rank")
    if mode == "single-m":
        if m is None:
            raise ValueError("single-m mode needs m")
        rank, wit = rank_mod_m(pres, d, m)
        return IndependenceReport(lv.p, lv.n, d, mode, rank == d, m=m, rank=rank, witness=wit)
    ok, divs = independent_all_m(pres, d)
    return IndependenceReport(lv.p, lv.n, d, mode, ok, elementary_divisors=divs)


def max_independent_d(pres: HomologyPresentation, mode: Mode = "all-m", m: int | None = None) -> int:
    """Largest d such that the first d images pass; 0 if even T_1 fails."""
    d = 0
    while d < pres.rank and check(pres, d + 1, mode, m).independent:
        d += 1
    return d


def criterion_verdict(pres: HomologyPresentation, d: int, mode: Mode = "all-m", m: int | None = None) -> IndependenceReport:
    """Test the first s*d images for a number field of degree d.

    The report notes whether the level exceeds ceil(C^2 (s d)^6), above which
    independence is guaranteed; at computable levels it never does.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    p = pres.level.p
    s = s_choice(p)
    rep = check(pres, s * d, mode, m)
    thr = prop5_threshold(p, d)
    rep.extra = {
        "degree": d,
        "s": s,
        "images_tested": s * d,
        "threshold": str(thr),
        "above_threshold": pres.level.q > thr,
    }
    return rep
