"""Explicit constants and effective torsion bounds.

Transcendental quantities are evaluated in ``mpmath.iv`` interval
arithmetic; a reported bound is the ceiling of the upper endpoint, so it
stays valid whatever the working precision.  Floors of algebraic quantities
such as ``(1 + l^(d/2))^2`` are computed exactly with integer square roots.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
from mpmath import iv
from sympy import isprime, primerange

DEFAULT_DIGITS = 50


class DOutOfRange(ValueError):
    pass


def constant_C_interval(digits: int = DEFAULT_DIGITS):
    """Enclosure of C = 4096 pi^2 / (2 sqrt 2 - 1)."""
    old = iv.dps
    iv.dps = digits
    try:
        return iv.mpf(4096) * iv.pi**2 / (2 * iv.sqrt(2) - 1)
    finally:
        iv.dps = old


def constant_C(digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """Upper endpoint of the enclosure of C, as an mpf at ``digits`` digits."""
    with mpmath.workdps(digits):
        return mpmath.mpf(constant_C_interval(digits).b)


def _ceil_upper(x) -> int:
    """Exact ceiling of the upper endpoint of an interval."""
    sign, man, exp, _ = x._mpi_[1]
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return man << exp
    return -((-man) >> -exp)


def l_choice(p: int) -> int:
    """Auxiliary prime of reduction: 5 if p = 3, else 3."""
    _check_prime(p)
    return 5 if p == 3 else 3


def s_choice(p: int) -> int:
    """Smallest prime different from p."""
    _check_prime(p)
    return 3 if p == 2 else 2


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise ValueError(f"p={p} is not prime")


def _check_d(d: int) -> None:
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")


def prop5_threshold(p: int, d: int, digits: int = DEFAULT_DIGITS) -> int:
    """ceil(C^2 (s d)^6): above this level the first s*d images are independent."""
    _check_d(d)
    D = s_choice(p) * d
    old = iv.dps
    iv.dps = digits
    try:
        C = constant_C_interval(digits)
        return _ceil_upper(C**2 * iv.mpf(D) ** 6)
    finally:
        iv.dps = old


def corollary6_bound(p: int, d: int, digits: int = DEFAULT_DIGITS) -> int:
    """Upper bound for p^n when a degree-d point of order p^n exists.

    C^2 (l^d + 1)(s d)^6 with (l, s) = (3, 2) for p >= 5, (5, 2) for p = 3
    and (3, 3) for p = 2.
    """
    _check_d(d)
    l, s = l_choice(p), s_choice(p)
    old = iv.dps
    iv.dps = digits
    try:
        C = constant_C_interval(digits)
        return _ceil_upper(C**2 * iv.mpf(l**d + 1) * iv.mpf((s * d) ** 6))
    finally:
        iv.dps = old


def reduction_case_bound(l: int, d: int) -> int:
    """floor((1 + l^(d/2))^2) = 1 + l^d + isqrt(4 l^d), exactly."""
    _check_d(d)
    ld = l**d
    return 1 + ld + math.isqrt(4 * ld)


def merel_oesterle_prime_bound(d: int) -> int:
    return reduction_case_bound(3, d)


def global_torsion_bound(d: int, digits: int = DEFAULT_DIGITS) -> int:
    """Product over primes p <= floor((1 + 3^(d/2))^2) of corollary6_bound(p, d)^2.

    The torsion group is Z/n1 x Z/n2, so each p-part has order at most the
    square of the bound on a cyclic p-power subgroup.  This combination rule
    is a choice made here; it is one valid way to assemble a single number.
    """
    out = 1
    for p in primerange(2, merel_oesterle_prime_bound(d) + 1):
        out *= corollary6_bound(p, d, digits) ** 2
    return out


@dataclass
class BoundReport:
    d: int
    p: int | None
    digits: int
    C: str
    C_squared: str
    merel_oesterle_prime_bound: int
    primes: list[int]
    per_prime: dict[str, dict] = field(default_factory=dict)
    global_bound: int | None = None

    def to_json(self) -> dict:
        out = asdict(self)
        if self.global_bound is not None:
            out["global_bound"] = str(self.global_bound)
            out["global_bound_digits"] = len(str(self.global_bound))
        return out


def bound_report(d: int, p: int | None = None, digits: int = DEFAULT_DIGITS) -> BoundReport:
    _check_d(d)
    Ci = constant_C_interval(digits)
    old = iv.dps
    iv.dps = digits
    try:
        C2 = Ci**2
    finally:
        iv.dps = old
    with mpmath.workdps(digits):
        C_str = mpmath.nstr(mpmath.mpf(Ci.b), 20)
        C2_str = mpmath.nstr(mpmath.mpf(C2.b), 20)
    mo = merel_oesterle_prime_bound(d)
    primes = [p] if p is not None else list(primerange(2, mo + 1))
    rep = BoundReport(d, p, digits, C_str, C2_str, mo, primes)
    for pr in primes:
        rep.per_prime[str(pr)] = {
            "l": l_choice(pr),
            "s": s_choice(pr),
            "prop5_threshold": str(prop5_threshold(pr, d, digits)),
            "corollary6_bound": str(corollary6_bound(pr, d, digits)),
            "reduction_case_bound": reduction_case_bound(l_choice(pr), d),
        }
    if p is None:
        rep.global_bound = global_torsion_bound(d, digits)
    return rep


# ----------------------------------------------------------------------------
# Lemma preconditions for a level q = p^n and D = s d.


@dataclass
class CascadeReport:
    q: int
    p: int
    n: int
    D: int
    conditions: dict[str, bool]
    implications: dict[str, dict[str, bool]]

    @property
    def final(self) -> bool:
        return self.conditions["final:q>C^2*D^6"]

    def to_json(self) -> dict:
        return asdict(self)


def cascade_check(q: int, D: int, p: int, digits: int = DEFAULT_DIGITS) -> CascadeReport:
    """Evaluate the three blocks of sufficient conditions and their implications.

    block1: the lemma hypotheses with |A| = q/D^2 - 2 and |B| = q/D - D - 2;
    block2: D >= 2, q/D^2 >= max(26, 4p), (q/2D^2)(q/2D) > 144 + (C/8) q^(3/2);
    block3: D >= 2, p^(n-1)/D^2 >= 4, q/D^2 >= 26, q^2/D^3 > C q^(3/2);
    final:  q > C^2 D^6.
    Each implication is reported as {antecedent, consequent, holds}; it
    "holds" unless the antecedent is true and the consequent false.
    """
    if D < 2:
        raise DOutOfRange(f"D must be >= 2, got {D}")
    _check_prime(p)
    n, rest = 0, q
    while rest % p == 0:
        rest //= p
        n += 1
    if rest != 1 or n < 1:
        raise ValueError(f"q={q} is not a power of p={p}")
    with mpmath.workdps(digits):
        C = mpmath.mpf(4096) * mpmath.pi**2 / (2 * mpmath.sqrt(2) - 1)
        C8 = C / 8
        q32 = mpmath.mpf(q) ** mpmath.mpf(1.5)
        qD2 = Fraction(q, D * D)
        qD = Fraction(q, D)
        lo = max(11, 2 * p + 1)
        A_len = qD2 - 2
        B_len = qD - D - 2

        def mp(x: Fraction) -> mpmath.mpf:
            return mpmath.mpf(x.numerator) / x.denominator

        c: dict[str, bool] = {}
        c["block1:|A|>=max(11,2p+1)"] = A_len >= lo
        c["block1:|B|>=max(11,2p+1)"] = B_len >= lo
        c["block1:product"] = bool(mp((qD2 - 13) * (qD - D - 13)) > 144 + C8 * q32) and qD2 >= 13
        c["block2:D>=2"] = D >= 2
        c["block2:q/D^2>=max(26,4p)"] = qD2 >= max(26, 4 * p)
        c["block2:product"] = bool(mp(qD2 / 2 * qD / 2) > 144 + C8 * q32)
        c["block3:D>=2"] = D >= 2
        c["block3:p^(n-1)/D^2>=4"] = Fraction(p ** (n - 1), D * D) >= 4
        c["block3:q/D^2>=26"] = qD2 >= 26
        c["block3:q^2/D^3>C*q^(3/2)"] = bool(mp(Fraction(q * q, D**3)) > C * q32)
        c["final:q>C^2*D^6"] = bool(q > C**2 * D**6)
        blocks = {
            b: all(v for k, v in c.items() if k.startswith(b + ":")) for b in ("block1", "block2", "block3")
        }
        # auxiliary steps used to pass from one block to the previous one
        aux = {
            "q>=26D^2": qD2 >= 26,
            "13+D<=q/(2D)": 13 + D <= qD / 2,
            "q/D^2>=4p": qD2 >= 4 * p,
            "q/D^2-2>=2p+1": qD2 - 2 >= 2 * p + 1,
            "q/D>=4pD": qD >= 4 * p * D,
            "q/D>=D+2p+3": qD >= D + 2 * p + 3,
            "144<=(C/8)q^(3/2)/2": bool(144 <= C8 * q32 / 2),
        }

    def imp(a: bool, b: bool) -> dict[str, bool]:
        return {"antecedent": a, "consequent": b, "holds": (not a) or b}

    implications = {
        "final=>block3:q^2/D^3>C*q^(3/2)": imp(c["final:q>C^2*D^6"], c["block3:q^2/D^3>C*q^(3/2)"]),
        "final=>block3": imp(c["final:q>C^2*D^6"], blocks["block3"]),
        "block3=>block2": imp(blocks["block3"], blocks["block2"]),
        "block2=>block1": imp(blocks["block2"], blocks["block1"]),
        "q>=26D^2=>13+D<=q/(2D)": imp(aux["q>=26D^2"], aux["13+D<=q/(2D)"]),
        "q/D^2>=4p=>q/D^2-2>=2p+1": imp(aux["q/D^2>=4p"], aux["q/D^2-2>=2p+1"]),
        "q/D>=4pD=>q/D>=D+2p+3": imp(aux["q/D>=4pD"], aux["q/D>=D+2p+3"]),
    }
    cond = dict(c)
    cond.update({f"{b}:all": v for b, v in blocks.items()})
    cond.update({f"aux:{k}": v for k, v in aux.items()})
    return CascadeReport(q, p, n, D, cond, implications)
