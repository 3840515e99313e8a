"""Walks on the sigma/tau graph of P^1(Z/p^n Z) that avoid the Hecke support.

Chemin A starts at (1, r).tau^2 = -r - 1 and steps backward
(sigma tau^2, i.e. minus one).  Chemin B starts at 1/r and steps backward
when p does not divide r; when p | r it starts at r/(r - 1) =
(1/r).sigma tau^2 sigma and steps forward (tau sigma, plus one).  Each step
visits an affine point and its sigma-image; the walk stops in front of the
first one that lies in Sigma_r.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .hecke import hecke_class, hecke_image, one_over, sigma_r_support
from .modular_symbols import HomologyPresentation, SymbolVector, solve_membership
from .projective_line import P1Point, PrimePowerLevel, act, canonicalize

BACKWARD = "στ²"
FORWARD = "τσ"


class NotADependency(ValueError):
    pass


@dataclass
class PathRecord:
    level: PrimePowerLevel
    r: int
    start: P1Point
    step: str
    visited: list[P1Point]
    interval: list[int]
    blocked_at: P1Point | None

    @property
    def interval_length(self) -> int:
        return len(self.interval)

    def interval_bounds(self) -> tuple[int, int] | None:
        """(lowest residue, length) with the interval read upward mod q."""
        if not self.interval:
            return None
        lo = self.interval[-1] if self.step == BACKWARD else self.interval[0]
        return lo, len(self.interval)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "start": self.start.to_str(),
            "step": self.step,
            "visited_count": len(self.visited),
            "interval_length": self.interval_length,
            "interval_bounds": self.interval_bounds(),
            "blocked_at": self.blocked_at.to_str() if self.blocked_at else None,
        }


def _walk(level: PrimePowerLevel, r: int, start: P1Point, step: str, avoid: frozenset[P1Point]) -> PathRecord:
    q = level.q
    sign = -1 if step == BACKWARD else 1
    visited: list[P1Point] = []
    interval: list[int] = []
    blocked = None
    c = start.value
    for _ in range(q):
        x = P1Point.affine(c)
        if x in avoid:
            blocked = x
            break
        visited.append(x)
        xs = act(x, "s", level)
        if xs in avoid:
            blocked = xs
            break
        visited.append(xs)
        interval.append(c)
        c = (c + sign) % q
    return PathRecord(level, r, start, step, visited, interval, blocked)


def _check_r(r: int, D: int) -> None:
    if not 1 <= r <= D:
        raise ValueError(f"need 1 <= r <= D, got r={r}, D={D}")


def build_chemin_A(level: PrimePowerLevel, r: int, D: int) -> PathRecord:
    _check_r(r, D)
    start = canonicalize(-r - 1, 1, level)
    return _walk(level, r, start, BACKWARD, sigma_r_support(r, level))


def build_chemin_B(level: PrimePowerLevel, r: int, D: int) -> PathRecord:
    _check_r(r, D)
    avoid = sigma_r_support(r, level)
    if r % level.p:
        return _walk(level, r, one_over(r, level), BACKWARD, avoid)
    start = canonicalize(r, r - 1, level)
    return _walk(level, r, start, FORWARD, avoid)


def length_bounds(level: PrimePowerLevel, D: int) -> tuple[Fraction, Fraction]:
    """Guaranteed interval lengths (A, B): q/D - D - 2 and q/D^2 - 2."""
    q = level.q
    return Fraction(q, D) - D - 2, Fraction(q, D * D) - 2


@dataclass
class Meeting:
    y: int
    z: int
    y_sigma_is_z: bool
    y_sigma_in_A_walk: bool

    def to_json(self) -> dict:
        return {"y": self.y, "z": self.z, "y_sigma_is_z": self.y_sigma_is_z,
                "y_sigma_in_A_walk": self.y_sigma_in_A_walk}


def _ascending(rec: PathRecord) -> list[int]:
    b = rec.interval_bounds()
    if b is None:
        return []
    lo, n = b
    return [(lo + i) % rec.level.q for i in range(n)]


def find_meeting(level: PrimePowerLevel, r: int, D: int,
                 A: PathRecord | None = None, B: PathRecord | None = None) -> Meeting | None:
    """First y in the A-interval (ascending) with -1/y in the B-interval."""
    A = A or build_chemin_A(level, r, D)
    B = B or build_chemin_B(level, r, D)
    q, p = level.q, level.p
    zs = set(B.interval)
    visited = set(A.visited)
    for y in _ascending(A):
        if y % p == 0:
            continue
        z = -pow(y, -1, q) % q
        if z in zs:
            ys = act(P1Point.affine(y), "s", level)
            return Meeting(y, z, ys == P1Point.affine(z), ys in visited)
    return None


@dataclass
class EliminationVerdict:
    forced: bool
    lambda_r: int
    reason: str
    trace: list[str] = field(default_factory=list)
    meeting: Meeting | None = None

    @property
    def verdict(self) -> str:
        return "lambda_r forced to 0" if self.forced else "argument inconclusive at this level"

    def to_json(self) -> dict:
        return {"forced": self.forced, "verdict": self.verdict, "lambda_r": self.lambda_r,
                "reason": self.reason, "trace": self.trace,
                "meeting": self.meeting.to_json() if self.meeting else None}


def dependency_vector(level: PrimePowerLevel, lambdas: list[int], m: int) -> SymbolVector:
    v = SymbolVector(level)
    for i, lam in enumerate(lambdas, start=1):
        if lam % m:
            v = v + hecke_image(i, level) * (lam % m)
    return v.mod(m)


def verify_elimination(pres: HomologyPresentation, r: int, lambdas: list[int], m: int,
                       D: int | None = None) -> EliminationVerdict:
    """Run the constancy argument on a concrete mod-m dependency of T_1..T_r.

    The argument writes v = sum lambda_i T_i{0,oo} as alpha - beta and uses
    lambda_r = alpha(1/r) - beta(1/r) = alpha(-r) - beta(-r-1).  Along a
    walk where alpha = beta at every visited point, that common value is
    constant; a meeting y.sigma = z links the two walks, which forces
    alpha(-r) = beta(-r-1).  Every link is checked on the actual (alpha, beta);
    any failure yields an inconclusive verdict, never a false claim.
    """
    level = pres.level
    D = D or r
    if len(lambdas) != r:
        raise ValueError(f"expected {r} coefficients, got {len(lambdas)}")
    cls = None
    for i, lam in enumerate(lambdas, start=1):
        term = hecke_class(i, pres) * (lam % m)
        cls = term if cls is None else cls + term
    if not cls.is_zero(m):
        raise NotADependency(f"sum lambda_i T_i{{0,oo}} is not zero mod {m}")
    lam_r = lambdas[-1] % m
    if all(lam % m == 0 for lam in lambdas):
        return EliminationVerdict(True, 0, "zero vector", ["all lambda_i = 0"])

    trace: list[str] = []

    def inconclusive(reason: str) -> EliminationVerdict:
        trace.append("stop: " + reason)
        return EliminationVerdict(False, lam_r, reason, trace)

    v = dependency_vector(level, lambdas, m)
    alpha, beta = solve_membership(v, pres, m)
    x1r = one_over(r, level)
    if v[x1r] != lam_r:
        return inconclusive(f"coefficient of 1/r is {v[x1r]}, not lambda_r={lam_r} (isolation fails)")
    trace.append(f"mu(1/r) = alpha - beta = {alpha[x1r]} - {beta[x1r]} = lambda_r = {lam_r}")

    def mu0(x: P1Point) -> bool:
        return (alpha[x] - beta[x]) % m == 0

    minus_r = canonicalize(-r, 1, level)
    A = build_chemin_A(level, r, D)
    B = build_chemin_B(level, r, D)

    # alpha(1/r) = alpha(-r), beta(1/r) = beta(-r-1) by invariance
    if alpha[x1r] != alpha[minus_r] or beta[x1r] != beta[A.start]:
        return inconclusive("invariance of alpha/beta fails (solver bug)")

    def prefix(rec: PathRecord, lead: list[P1Point], exempt: P1Point | None, name: str):
        """Longest usable prefix of a walk and the common value alpha = beta on it.

        A point is usable when mu = 0 there; ``exempt`` is allowed through
        (alpha there equals alpha of its sigma-image) but contributes nothing.
        """
        def ok(y: P1Point) -> bool:
            return y == exempt or mu0(y)

        if not all(ok(y) for y in lead):
            trace.append(f"{name}: link point carries mu != 0")
            return None, rec
        used = [y for y in lead if y != exempt]
        keep_v: list[P1Point] = []
        keep_i: list[int] = []
        pts = rec.visited
        for k in range(0, len(pts) - 1, 2):
            pair = pts[k : k + 2]
            if not all(ok(y) for y in pair):
                trace.append(f"{name}: prefix cut after {len(keep_i)} steps")
                break
            keep_v += pair
            keep_i.append(pair[0].value)
            used += [y for y in pair if y != exempt]
        vals = {alpha[y] for y in used} | {beta[y] for y in used}
        if len(vals) != 1:
            trace.append(f"{name}: alpha = beta is not constant on the prefix")
            return None, rec
        cut = PathRecord(rec.level, rec.r, rec.start, rec.step, keep_v, keep_i, rec.blocked_at)
        return vals.pop(), cut

    cA, A = prefix(A, [], None, "A")
    if cA is None or not A.interval:
        return inconclusive("chemin A has no usable prefix")
    trace.append(f"A: alpha = beta = {cA} on a prefix of {A.interval_length} steps")

    # link -r into the B walk; in the p | r case through (1-r)/r
    if r % level.p:
        cB, B = prefix(B, [minus_r], x1r, "B")
    else:
        cB, B = prefix(B, [minus_r, act(minus_r, "tt", level)], None, "B")
    if cB is None or not B.interval:
        return inconclusive("chemin B has no usable prefix")
    trace.append(f"B: alpha = beta = {cB} from -r on a prefix of {B.interval_length} steps")

    meet = find_meeting(level, r, D, A, B)
    if meet is None:
        return inconclusive("chemins do not meet")
    trace.append(f"meeting y={meet.y}, z={meet.z}: alpha(y) = alpha(y.sigma) links A and B")
    if not meet.y_sigma_is_z or alpha[P1Point.affine(meet.y)] != alpha[P1Point.affine(meet.z)]:
        return inconclusive("meeting check failed")
    forced = (alpha[minus_r] - beta[A.start]) % m
    trace.append(f"lambda_r = alpha(-r) - beta(-r-1) = {cB} - {cA} = {forced}")
    if forced != 0 or lam_r != 0:
        raise AssertionError("constancy trace closed but lambda_r != 0")
    return EliminationVerdict(True, lam_r, "chemins meet", trace, meet)
