"""Hecke images T_r{0, oo} as combinations of Manin symbols."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .modular_symbols import HomologyClass, HomologyPresentation, SymbolVector
from .projective_line import P1Point, PrimePowerLevel, canonicalize


@dataclass(frozen=True, order=True)
class HeckeMatrix:
    """[[u, v], [w, t]] with ut - vw = r, 0 <= w < t, 0 <= v < u.

    Field order (t, w, u, v) fixes the enumeration order.
    """

    t: int
    w: int
    u: int
    v: int

    @property
    def det(self) -> int:
        return self.u * self.t - self.v * self.w

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.u, self.v, self.w, self.t


@lru_cache(maxsize=256)
def hecke_matrices(r: int) -> tuple[HeckeMatrix, ...]:
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    out = []
    for t in range(1, r + 1):
        for w in range(t):
            for u in range(1, r + 1):
                if w == 0:
                    if u * t == r:
                        out.extend(HeckeMatrix(t, 0, u, v) for v in range(u))
                    continue
                num = u * t - r
                if num >= 0 and num % w == 0 and num // w < u:
                    out.append(HeckeMatrix(t, w, u, num // w))
    return tuple(out)


def hecke_image(r: int, level: PrimePowerLevel) -> SymbolVector:
    """Sum of the points (w, t) over hecke_matrices(r); pairs with p | gcd(w, t) are dropped."""
    coeffs: dict[P1Point, int] = {}
    for mat in hecke_matrices(r):
        if math.gcd(mat.w, mat.t, level.p) > 1:
            continue
        x = canonicalize(mat.w, mat.t, level)
        coeffs[x] = coeffs.get(x, 0) + 1
    return SymbolVector(level, coeffs)


def hecke_class(r: int, pres: HomologyPresentation) -> HomologyClass:
    return pres.reduce(hecke_image(r, pres.level))


def one_over(r: int, level: PrimePowerLevel) -> P1Point:
    """The point (1, r), written 1/r."""
    return canonicalize(1, r, level)


def sigma_r_support(r: int, level: PrimePowerLevel) -> frozenset[P1Point]:
    """Points occurring in some T_k{0, oo}, k <= r, other than (1, r)."""
    pts: set[P1Point] = set()
    for k in range(1, r + 1):
        pts |= hecke_image(k, level).support()
    pts.discard(one_over(r, level))
    return frozenset(pts)
