"""Manin-symbol presentation of H_1(X_0(p^n), cusps; Z).

The homology is the quotient of Z[P^1(Z/p^n Z)] by the sigma-invariant and
tau-invariant elements.  Those submodules are spanned by orbit sums, one per
orbit, which form the rows of the relation matrix.  The quotient basis is
the set of non-pivot generators of the reduced Hermite form.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .linalg import EchelonForm, elementary_divisors, hermite_form
from .projective_line import (
    P1Point,
    PrimePowerLevel,
    action_tables,
    enumerate_points,
    orbits,
    point_from_index,
)

CACHE_FORMAT_VERSION = 1
CACHE_ENV = "KAMIENNY_CACHE"


class TorsionDetected(RuntimeError):
    """The relation lattice has a non-unit elementary divisor."""


class NotInKernel(ValueError):
    """The vector does not reduce to zero in homology."""


@dataclass(frozen=True)
class SymbolVector:
    """A finitely supported integer combination of points."""

    level: PrimePowerLevel
    coeffs: Mapping[P1Point, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", {x: int(c) for x, c in self.coeffs.items() if c})

    @classmethod
    def from_array(cls, level: PrimePowerLevel, arr: Iterable[int]) -> "SymbolVector":
        return cls(level, {point_from_index(i, level): int(c) for i, c in enumerate(arr) if c})

    @classmethod
    def basis(cls, x: P1Point, level: PrimePowerLevel, coef: int = 1) -> "SymbolVector":
        return cls(level, {x: coef})

    def to_array(self) -> np.ndarray:
        arr = np.zeros(self.level.size, dtype=object)
        for x, c in self.coeffs.items():
            arr[x.index(self.level)] = c
        return arr

    def __getitem__(self, x: P1Point) -> int:
        return self.coeffs.get(x, 0)

    def _combine(self, other: "SymbolVector", sign: int) -> "SymbolVector":
        if other.level != self.level:
            raise ValueError("levels differ")
        out = dict(self.coeffs)
        for x, c in other.coeffs.items():
            out[x] = out.get(x, 0) + sign * c
        return SymbolVector(self.level, out)

    def __add__(self, other: "SymbolVector") -> "SymbolVector":
        return self._combine(other, 1)

    def __sub__(self, other: "SymbolVector") -> "SymbolVector":
        return self._combine(other, -1)

    def __mul__(self, k: int) -> "SymbolVector":
        return SymbolVector(self.level, {x: k * c for x, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "SymbolVector":
        return self * -1

    def mod(self, m: int) -> "SymbolVector":
        return SymbolVector(self.level, {x: c % m for x, c in self.coeffs.items()})

    def support(self) -> set[P1Point]:
        return set(self.coeffs)

    def items_sorted(self) -> list[tuple[P1Point, int]]:
        return sorted(self.coeffs.items(), key=lambda kv: kv[0].index(self.level))

    def to_json(self) -> list[list]:
        return [[x.to_str(), c] for x, c in self.items_sorted()]


@dataclass(frozen=True)
class HomologyClass:
    level: PrimePowerLevel
    coordinates: tuple[int, ...]

    def is_zero(self, modulus: int | None = None) -> bool:
        if modulus is None:
            return not any(self.coordinates)
        return all(c % modulus == 0 for c in self.coordinates)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        return HomologyClass(self.level, tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + other * -1

    def __mul__(self, k: int) -> "HomologyClass":
        return HomologyClass(self.level, tuple(k * a for a in self.coordinates))

    __rmul__ = __mul__


def relation_rows(level: PrimePowerLevel) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """sigma-orbits and tau-orbits as index tuples (each one relation row)."""
    sig, tau = action_tables(level)
    return orbits(sig), orbits(tau)


@dataclass(frozen=True, eq=False)
class HomologyPresentation:
    level: PrimePowerLevel
    sigma_orbits: tuple[tuple[int, ...], ...]
    tau_orbits: tuple[tuple[int, ...], ...]
    echelon: EchelonForm
    elementary_divisors: tuple[int, ...]

    @property
    def generators(self) -> list[P1Point]:
        return enumerate_points(self.level)

    @property
    def relation_matrix(self) -> list[dict[int, int]]:
        return [{i: 1 for i in orb} for orb in self.sigma_orbits + self.tau_orbits]

    @property
    def relation_rank(self) -> int:
        return self.echelon.rank

    @property
    def rank(self) -> int:
        """Rank of the free quotient."""
        return self.level.size - self.echelon.rank

    @cached_property
    def basis(self) -> tuple[int, ...]:
        return tuple(self.echelon.non_pivots())

    @cached_property
    def projection(self) -> np.ndarray:
        """N x rank matrix P with reduce(v) = v @ P."""
        col = {c: b for b, c in enumerate(self.basis)}
        big = max((abs(e) for r in self.echelon.rows for e in r.values()), default=0) >= 2**31
        P = np.zeros((self.level.size, self.rank), dtype=object if big else np.int64)
        for c, b in col.items():
            P[c, b] = 1
        for j, row in zip(self.echelon.pivots, self.echelon.rows):
            for c, e in row.items():
                if c != j:
                    P[j, col[c]] = -e
        P.flags.writeable = False
        return P

    @cached_property
    def _orbit_ids(self) -> tuple[np.ndarray, np.ndarray]:
        so = np.empty(self.level.size, dtype=np.int64)
        to = np.empty(self.level.size, dtype=np.int64)
        for k, orb in enumerate(self.sigma_orbits):
            so[list(orb)] = k
        for k, orb in enumerate(self.tau_orbits):
            to[list(orb)] = k
        return so, to

    def reduce(self, v: SymbolVector | np.ndarray) -> HomologyClass:
        if isinstance(v, SymbolVector):
            if v.level != self.level:
                raise ValueError("levels differ")
            coords = [0] * self.rank
            P = self.projection
            for x, c in v.coeffs.items():
                row = P[x.index(self.level)]
                for b in np.flatnonzero(row):
                    coords[b] += c * int(row[b])
            return HomologyClass(self.level, tuple(coords))
        arr = np.asarray(v)
        return HomologyClass(self.level, tuple(int(c) for c in arr.astype(object) @ self.projection))

    def xi_class(self, x: P1Point) -> HomologyClass:
        return self.reduce(SymbolVector.basis(x, self.level))

    def solve_membership(
        self, v: SymbolVector, modulus: int | None = None
    ) -> tuple[SymbolVector, SymbolVector]:
        return solve_membership(v, self, modulus)

    def to_cache_dict(self) -> dict:
        triples = [
            [i, c, e] for i, row in enumerate(self.echelon.rows) for c, e in sorted(row.items())
        ]
        return {
            "format_version": CACHE_FORMAT_VERSION,
            "p": self.level.p,
            "n": self.level.n,
            "rank": self.rank,
            "pivots": list(self.echelon.pivots),
            "rows": triples,
        }


def _from_echelon(level: PrimePowerLevel, ech: EchelonForm) -> HomologyPresentation:
    sig_orbs, tau_orbs = relation_rows(level)
    if any(e != 1 for e in ech.pivot_entries):
        divs = elementary_divisors(
            [[row.get(c, 0) for c in range(level.size)] for row in ech.rows]
        )
        if any(d != 1 for d in divs):
            raise TorsionDetected(f"level {level}: elementary divisors {sorted(set(divs))}")
        raise RuntimeError(f"level {level}: non-unit Hermite pivot on a free quotient")
    return HomologyPresentation(
        level, tuple(sig_orbs), tuple(tau_orbs), ech, tuple([1] * ech.rank)
    )


def build_presentation(level: PrimePowerLevel) -> HomologyPresentation:
    sig_orbs, tau_orbs = relation_rows(level)
    rows = [{i: 1 for i in orb} for orb in sig_orbs + tau_orbs]
    return _from_echelon(level, hermite_form(rows, level.size))


def solve_membership(
    v: SymbolVector, pres: HomologyPresentation, modulus: int | None = None
) -> tuple[SymbolVector, SymbolVector]:
    """Write ``v = alpha - beta`` with alpha sigma-invariant, beta tau-invariant.

    Unknowns are one value per sigma-orbit (alpha) and per tau-orbit (beta);
    each point x gives the equation ``alpha[orb_s(x)] - beta[orb_t(x)] = v_x``.
    This is a potential problem on the bipartite orbit graph, solved by
    breadth-first propagation.  The solution is unique up to adding the same
    constant to both parts on each connected component; the constant is
    chosen to make the most frequent coefficient zero.

    With ``modulus`` the equations hold mod m and coefficients are returned
    in ``[0, m)``.
    """
    level = pres.level
    if v.level != level:
        raise ValueError("levels differ")
    so, to = pres._orbit_ids
    ns, nt = len(pres.sigma_orbits), len(pres.tau_orbits)
    m = modulus
    val = [0] * level.size
    for x, c in v.coeffs.items():
        val[x.index(level)] = c % m if m else c

    def norm(z: int) -> int:
        return z % m if m else z

    alpha: list[int | None] = [None] * ns
    beta: list[int | None] = [None] * nt
    components: list[list[int]] = []  # point indices per component
    for root in range(ns):
        if alpha[root] is not None:
            continue
        alpha[root] = 0
        comp: list[int] = []
        queue = deque([("s", root)])
        while queue:
            kind, k = queue.popleft()
            if kind == "s":
                for x in pres.sigma_orbits[k]:
                    comp.append(x)
                    j = to[x]
                    if beta[j] is None:
                        beta[j] = norm(alpha[k] - val[x])
                        queue.append(("t", j))
            else:
                for x in pres.tau_orbits[k]:
                    i = so[x]
                    if alpha[i] is None:
                        alpha[i] = norm(beta[k] + val[x])
                        queue.append(("s", i))
        components.append(sorted(set(comp)))

    for x in range(level.size):
        if norm(alpha[so[x]] - beta[to[x]]) != val[x]:
            raise NotInKernel(f"vector is not a relation at level {level}")

    shift_s = [0] * ns
    shift_t = [0] * nt
    for comp in components:
        counts = Counter()
        for x in comp:
            counts[alpha[so[x]]] += 1
            counts[beta[to[x]]] += 1
        best = max(counts.values())
        c0 = min(k for k, n in counts.items() if n == best)
        for x in comp:
            shift_s[so[x]] = c0
            shift_t[to[x]] = c0
    a = SymbolVector.from_array(level, [norm(alpha[so[x]] - shift_s[so[x]]) for x in range(level.size)])
    b = SymbolVector.from_array(level, [norm(beta[to[x]] - shift_t[to[x]]) for x in range(level.size)])
    return a, b


def is_invariant(v: SymbolVector, letter: str, modulus: int | None = None) -> bool:
    sig, tau = action_tables(v.level)
    perm = sig if letter == "s" else tau
    arr = v.to_array()
    if modulus:
        arr = arr % modulus
    return all(arr[int(perm[i])] == arr[i] for i in range(len(arr)))


class PresentationCache:
    """Directory of presentation JSON files, with hit/miss counters.

    The directory defaults to ``$KAMIENNY_CACHE``; with neither set the
    cache is disabled and every call builds afresh.
    """

    def __init__(self, directory: str | os.PathLike | None = None):
        directory = directory or os.environ.get(CACHE_ENV)
        self.directory = Path(directory) if directory else None
        self.hits = 0
        self.misses = 0
        self._memory: dict[PrimePowerLevel, HomologyPresentation] = {}

    def path_for(self, level: PrimePowerLevel) -> Path | None:
        if self.directory is None:
            return None
        return self.directory / f"presentation_p{level.p}_n{level.n}.json"

    def get(self, level: PrimePowerLevel) -> HomologyPresentation:
        if level in self._memory:
            return self._memory[level]
        path = self.path_for(level)
        pres = None
        if path is not None and path.exists():
            pres = load_presentation(path, level)
        if pres is None:
            self.misses += 1
            pres = build_presentation(level)
            if path is not None:
                save_presentation(pres, path)
        else:
            self.hits += 1
        self._memory[level] = pres
        return pres

    def entries(self) -> list[dict]:
        if self.directory is None or not self.directory.exists():
            return []
        out = []
        for f in sorted(self.directory.glob("presentation_p*_n*.json")):
            try:
                d = json.loads(f.read_text())
                out.append({"file": f.name, "p": d["p"], "n": d["n"], "rank": d["rank"],
                            "format_version": d["format_version"], "bytes": f.stat().st_size})
            except (OSError, ValueError, KeyError):
                out.append({"file": f.name, "error": "unreadable"})
        return out


def save_presentation(pres: HomologyPresentation, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    data = json.dumps(pres.to_cache_dict(), sort_keys=True, separators=(",", ":"))
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_presentation(path: Path, level: PrimePowerLevel) -> HomologyPresentation | None:
    """Load a cached presentation; ``None`` if the file is stale or foreign."""
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, ValueError):
        return None
    if d.get("format_version") != CACHE_FORMAT_VERSION or (d.get("p"), d.get("n")) != (level.p, level.n):
        return None
    pivots = tuple(d["pivots"])
    rows: list[dict[int, int]] = [dict() for _ in pivots]
    for i, c, e in d["rows"]:
        rows[i][c] = e
    ech = EchelonForm(level.size, pivots, tuple(rows))
    if level.size - ech.rank != d["rank"]:
        return None
    return _from_echelon(level, ech)
