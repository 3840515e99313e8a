"""Arithmetic on the projective line P^1(Z/p^n Z).

Points are stored in a fixed representative set: ``(c, 1)`` for
``c in [0, q)`` ("affine") and ``(1, p*k)`` for ``k in [0, p^(n-1))``
("infinity-like").  The ordering returned by :func:`enumerate_points` is the
index order used by every coefficient vector in the package.

The group acts on the right on row vectors ``(w, t)``::

    (w, t) . sigma = (-t, w)        sigma = [[0, 1], [-1, 0]]
    (w, t) . tau   = (t, -w - t)    tau   = [[0, -1], [1, -1]]

so that ``tau sigma`` adds one to an affine residue and ``sigma tau^2``
subtracts one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np
from sympy import isprime

DEFAULT_Q_CAP = 2**48

SIGMA = ((0, 1), (-1, 0))
TAU = ((0, -1), (1, -1))


class NotAPoint(ValueError):
    """Raised when a pair (w, t) has gcd(w, t, p) > 1."""


class LevelError(ValueError):
    """Raised for an invalid prime-power level."""


@dataclass(frozen=True)
class PrimePowerLevel:
    """The level q = p^n of X_0(p^n)."""

    p: int
    n: int
    cap: int = field(default=DEFAULT_Q_CAP, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not isinstance(self.n, int):
            raise LevelError("p and n must be integers")
        if self.n < 1:
            raise LevelError(f"n must be >= 1, got {self.n}")
        if not isprime(self.p):
            raise LevelError(f"p={self.p} is not prime")
        # compare exponents before forming the power, so huge n never allocates
        if self.n * math.log2(self.p) > math.log2(self.cap) + 1 or self.p**self.n > self.cap:
            raise LevelError(f"q={self.p}^{self.n} exceeds the configured cap {self.cap}")

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def q_inf(self) -> int:
        """Number of infinity-like points, p^(n-1)."""
        return self.p ** (self.n - 1)

    @property
    def size(self) -> int:
        return self.q + self.q_inf

    @classmethod
    def from_q(cls, q: int, cap: int = DEFAULT_Q_CAP) -> "PrimePowerLevel":
        """Recover (p, n) from a prime power q."""
        if q < 2:
            raise LevelError(f"q={q} is not a prime power")
        p = next((d for d in range(2, math.isqrt(q) + 1) if q % d == 0), q)
        n, rest = 0, q
        while rest % p == 0:
            rest //= p
            n += 1
        if rest != 1:
            raise LevelError(f"q={q} is not a prime power")
        return cls(p, n, cap)

    def __str__(self) -> str:
        return f"{self.p}^{self.n}"


class PointKind(str, Enum):
    AFFINE = "A"
    INFINITY = "I"


@dataclass(frozen=True, order=True)
class P1Point:
    """Canonical point: ``A:c`` stands for (c, 1), ``I:k`` for (1, p*k)."""

    kind: PointKind
    value: int

    @classmethod
    def affine(cls, c: int) -> "P1Point":
        return cls(PointKind.AFFINE, c)

    @classmethod
    def infinity(cls, k: int) -> "P1Point":
        return cls(PointKind.INFINITY, k)

    @property
    def is_affine(self) -> bool:
        return self.kind is PointKind.AFFINE

    def pair(self, level: PrimePowerLevel) -> tuple[int, int]:
        """Expand back to a representative pair (w, t)."""
        if self.is_affine:
            return self.value, 1
        return 1, (level.p * self.value) % level.q

    def index(self, level: PrimePowerLevel) -> int:
        return self.value if self.is_affine else level.q + self.value

    def to_str(self) -> str:
        return f"{self.kind.value}:{self.value}"

    @classmethod
    def from_str(cls, s: str) -> "P1Point":
        kind, _, value = s.partition(":")
        return cls(PointKind(kind), int(value))

    def __str__(self) -> str:
        return self.to_str()


def canonicalize(w: int, t: int, level: PrimePowerLevel) -> P1Point:
    p, q = level.p, level.q
    w %= q
    t %= q
    if t % p:
        return P1Point.affine(w * pow(t, -1, q) % q)
    if w % p:
        return P1Point.infinity((t * pow(w, -1, q) % q) // p)
    raise NotAPoint(f"gcd({w}, {t}, {p}) > 1: not a point of P^1(Z/{q}Z)")


def point_from_index(i: int, level: PrimePowerLevel) -> P1Point:
    if not 0 <= i < level.size:
        raise IndexError(i)
    return P1Point.affine(i) if i < level.q else P1Point.infinity(i - level.q)


def enumerate_points(level: PrimePowerLevel) -> list[P1Point]:
    """All points: affine by ascending c, then infinity-like by ascending k."""
    return [point_from_index(i, level) for i in range(level.size)]


@dataclass(frozen=True)
class GroupWord:
    """A word in sigma and tau, stored as a string over {'s', 't'}.

    ``GroupWord.parse`` accepts ``s``/``t``, the Greek letters and a
    trailing ``²`` or ``³`` as exponent, e.g. ``"στ²σ"``.
    """

    letters: str

    def __post_init__(self) -> None:
        if set(self.letters) - {"s", "t"}:
            raise ValueError(f"bad letters in word {self.letters!r}")

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        out: list[str] = []
        for ch in text.replace(" ", ""):
            if ch in "sσ":
                out.append("s")
            elif ch in "tτ":
                out.append("t")
            elif ch in "²³" and out:
                out.extend(out[-1] * (1 if ch == "²" else 2))
            else:
                raise ValueError(f"cannot parse {ch!r} in word {text!r}")
        return cls("".join(out))

    def __add__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        m = ((1, 0), (0, 1))
        for ch in self.letters:
            m = _matmul(m, SIGMA if ch == "s" else TAU)
        return m


def _matmul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def act_pair(w: int, t: int, word: GroupWord | str) -> tuple[int, int]:
    """Right action on a raw integer pair (no reduction)."""
    if isinstance(word, str):
        word = GroupWord.parse(word)
    for ch in word:
        w, t = (-t, w) if ch == "s" else (t, -w - t)
    return w, t


def act(x: P1Point, word: GroupWord | str, level: PrimePowerLevel) -> P1Point:
    w, t = act_pair(*x.pair(level), word)
    return canonicalize(w, t, level)


@lru_cache(maxsize=64)
def action_tables(level: PrimePowerLevel) -> tuple[np.ndarray, np.ndarray]:
    """Index permutations of sigma and tau on the enumerate() order."""
    pts = enumerate_points(level)
    sig = np.array([act(x, "s", level).index(level) for x in pts], dtype=np.int64)
    tau = np.array([act(x, "t", level).index(level) for x in pts], dtype=np.int64)
    sig.flags.writeable = False
    tau.flags.writeable = False
    return sig, tau


def orbits(perm: Sequence[int] | np.ndarray) -> list[tuple[int, ...]]:
    """Cycles of an index permutation, each starting at its smallest index."""
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = int(perm[j])
        out.append(tuple(cyc))
    return out


def points_to_strs(points: Iterable[P1Point]) -> list[str]:
    return [x.to_str() for x in points]
