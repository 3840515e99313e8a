"""Triangular windows, the bilinear sum Lambda and its Fourier blocks.

For residue intervals A, B mod q = p^n the sum

    Lambda = sum over units r of Psi_A(r) Psi_B(-1/r)

is positive exactly when some y in A, z in B satisfy y z = -1 mod q.
Fourier inversion writes it as

    Lambda = q^-2 sum_{h, h'} F_A(h) F_B(h') S(-h, -h'; q),
    F(h) = sum_m Psi(m) e^{2 pi i h m / q},

and the blocks (h, h') = (0, 0), (!= 0, 0), (0, != 0), (!= 0, != 0) are
estimated separately.  Window values and Lambda are exact rationals;
floating point enters only through the exponentials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bounds import constant_C
from .projective_line import PrimePowerLevel

# 64 pi^2 / (2 sqrt 2 - 1), the constant in |Lambda_s| <= SALIE_BLOCK * sqrt(q)
SALIE_BLOCK = 64 * math.pi**2 / (2 * math.sqrt(2) - 1)


class HypothesisUnmet(ValueError):
    """K < p: the values are computed but the estimates are not asserted.

    ``decomposition`` holds the computed values when available.
    """

    def __init__(self, msg: str, decomposition: "LambdaDecomposition | None" = None):
        super().__init__(msg)
        self.decomposition = decomposition


class DegenerateH(ValueError):
    """theta_closed at h = 0 mod q; the limit value is K + 1."""


@dataclass(frozen=True)
class Window:
    """Triangular bump on {a+1, ..., a+2K} mod q, peak 1, total mass K + 1."""

    q: int
    a: int
    K: int

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if 2 * self.K >= self.q:
            raise ValueError(f"need 2K < q, got K={self.K}, q={self.q}")
        object.__setattr__(self, "a", self.a % self.q)

    @classmethod
    def from_interval(cls, q: int, lo: int, length: int) -> "Window":
        """Window on the residues lo, ..., lo+length-1; an odd interval loses its top point."""
        K = min(length // 2, (q - 1) // 2)
        return cls(q, lo - 1, K)

    def value(self, x: int) -> Fraction:
        k = (x - self.a) % self.q
        if 1 <= k <= self.K:
            return Fraction(k, self.K)
        if self.K < k <= 2 * self.K:
            return Fraction(2 * self.K + 1 - k, self.K)
        return Fraction(0)

    def support(self) -> list[int]:
        return [(self.a + k) % self.q for k in range(1, 2 * self.K + 1)]

    def items(self) -> list[tuple[int, Fraction]]:
        return [(x, self.value(x)) for x in self.support()]

    def mass(self) -> Fraction:
        return sum((v for _, v in self.items()), Fraction(0))

    def as_array(self) -> np.ndarray:
        arr = np.zeros(self.q)
        for x, v in self.items():
            arr[x] = float(v)
        return arr

    def to_json(self) -> dict:
        return {"q": self.q, "a": self.a, "K": self.K}


def psi_eval(w: Window, x: int) -> Fraction:
    return w.value(x)


def _same_modulus(q: int, *windows: Window) -> PrimePowerLevel:
    for w in windows:
        if w.q != q:
            raise ValueError(f"window on modulus {w.q}, expected {q}")
    return PrimePowerLevel.from_q(q)


def lambda_exact(q: int, A: Window, B: Window) -> Fraction:
    level = _same_modulus(q, A, B)
    total = Fraction(0)
    for r, va in A.items():
        if r % level.p == 0:
            continue
        total += va * B.value(-pow(r, -1, q))
    return total


def kloosterman(h: int, hp: int, q: int) -> complex:
    """S(-h, -h'; q) = sum over units r of e^{2 pi i (-h r - h' rbar)/q}, rbar = -1/r."""
    level = PrimePowerLevel.from_q(q)
    re, im = [], []
    for r in range(1, q):
        if r % level.p == 0:
            continue
        rbar = -pow(r, -1, q)
        ang = 2 * math.pi * ((-h * r - hp * rbar) % q) / q
        re.append(math.cos(ang))
        im.append(math.sin(ang))
    return complex(math.fsum(re), math.fsum(im))


@lru_cache(maxsize=2)
def kloosterman_table(q: int) -> np.ndarray:
    """All S(-h, -h'; q) at once: the 2-D DFT of the indicator of {(r, -1/r)}."""
    level = PrimePowerLevel.from_q(q)
    M = np.zeros((q, q))
    for r in range(1, q):
        if r % level.p:
            M[r, -pow(r, -1, q) % q] = 1.0
    S = np.fft.fft2(M)
    S.setflags(write=False)
    return S


def window_transform(w: Window) -> np.ndarray:
    """F(h) = sum_m Psi(m) e^{+2 pi i h m / q} for every h."""
    return w.q * np.fft.ifft(w.as_array())


def theta_direct(h: int, w: Window, q: int | None = None) -> float:
    q = _check_q(w, q)
    re, im = [], []
    for m, v in w.items():
        ang = 2 * math.pi * ((h * m) % q) / q
        re.append(float(v) * math.cos(ang))
        im.append(float(v) * math.sin(ang))
    return math.hypot(math.fsum(re), math.fsum(im))


def theta_closed(h: int, w: Window, q: int | None = None) -> float:
    q = _check_q(w, q)
    if h % q == 0:
        raise DegenerateH("theta_closed is undefined at h = 0 mod q; use K + 1")
    x = math.pi * (h % q) / q
    K = w.K
    return abs(math.sin(x * K) * math.sin(x * (K + 1))) / (K * math.sin(x) ** 2)


def theta_bound(h: int, K: int, q: int) -> float:
    """(1/K) (pi / (pi h/q + 1/(K+1)))^2 for 0 <= h <= q/2."""
    if not 0 <= h <= q // 2:
        raise ValueError(f"need 0 <= h <= q/2, got h={h}, q={q}")
    return (math.pi / (math.pi * h / q + 1 / (K + 1))) ** 2 / K


def _check_q(w: Window, q: int | None) -> int:
    if q is not None and q != w.q:
        raise ValueError(f"window on modulus {w.q}, expected {q}")
    return w.q


def alpha_value(level: PrimePowerLevel, A: Window) -> Fraction:
    """-sum Psi(m) + p sum_{p | m} Psi(m)."""
    divisible = sum((v for m, v in A.items() if m % level.p == 0), Fraction(0))
    return -A.mass() + level.p * divisible


def alpha_bound(p: int, K: int) -> Fraction:
    return p * (2 + Fraction(p, K)) - 1


def alpha_term(q: int, A: Window) -> tuple[Fraction, Fraction]:
    level = _same_modulus(q, A)
    if A.K < level.p:
        raise HypothesisUnmet(f"K={A.K} < p={level.p}")
    val, bnd = alpha_value(level, A), alpha_bound(level.p, A.K)
    if val > bnd:
        raise AssertionError(f"alpha={val} exceeds its bound {bnd}")
    return val, bnd


@dataclass
class LambdaDecomposition:
    q: int
    A: Window
    B: Window
    lambda00: Fraction
    lambda0_row: float
    lambda0_col: float
    lambda_s: float
    lambda_exact: Fraction
    lambda0_row_exact: Fraction
    lambda0_col_exact: Fraction
    residual: float
    hypothesis: bool
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return float(self.lambda00) + self.lambda0_row + self.lambda0_col + self.lambda_s

    @property
    def bounds_hold(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "lambda00": str(self.lambda00),
            "lambda0_row": self.lambda0_row,
            "lambda0_row_exact": str(self.lambda0_row_exact),
            "lambda0_col": self.lambda0_col,
            "lambda0_col_exact": str(self.lambda0_col_exact),
            "lambda_s": self.lambda_s,
            "lambda_exact": str(self.lambda_exact),
            "lambda_exact_float": float(self.lambda_exact),
            "residual": self.residual,
            "hypothesis_K_ge_p": self.hypothesis,
            "checks": self.checks,
        }


def assembled_lower_bound(q: int, K: int, Kp: int) -> float:
    """(1/2q)[(K-5)(K'-5) - 36] - 64 pi^2/(2 sqrt 2 - 1) sqrt q."""
    return ((K - 5) * (Kp - 5) - 36) / (2 * q) - SALIE_BLOCK * math.sqrt(q)


def lambda_decompose(q: int, A: Window, B: Window, check_bounds: bool = True,
                     rel_tol: float = 1e-6) -> LambdaDecomposition:
    """Split Lambda into its four Fourier blocks and test the estimates on each.

    With ``check_bounds`` and K or K' below p, HypothesisUnmet is raised with
    the computed decomposition attached.
    """
    level = _same_modulus(q, A, B)
    p, n = level.p, level.n
    S = kloosterman_table(q)
    FA, FB = window_transform(A), window_transform(B)

    units = q - q // p
    lam00 = Fraction(units, q * q) * A.mass() * B.mass()
    row = float((FA[1:] * S[1:, 0]).sum().real) * FB[0].real / q**2
    col = float((S[0, 1:] * FB[1:]).sum().real) * FA[0].real / q**2
    lam_s = float((FA[1:] @ S[1:, 1:] @ FB[1:]).real) / q**2
    exact = lambda_exact(q, A, B)
    row_exact = -(B.K + 1) * alpha_value(level, A) / p ** (n + 1)
    col_exact = -(A.K + 1) * alpha_value(level, B) / p ** (n + 1)
    total = float(lam00) + row + col + lam_s
    scale = max(abs(float(exact)), float(lam00), 1.0)
    residual = abs(total - float(exact)) / scale

    hyp = A.K >= p and B.K >= p
    dec = LambdaDecomposition(q, A, B, lam00, row, col, lam_s, exact, row_exact, col_exact, residual, hyp)
    dec.checks["inversion"] = residual <= rel_tol
    dec.checks["lambda00_closed_form"] = lam00 == (1 - Fraction(1, p)) * (A.K + 1) * (B.K + 1) / q
    dec.checks["lambda0_row_matches_alpha"] = abs(row - float(row_exact)) <= rel_tol * scale
    dec.checks["lambda0_col_matches_alpha"] = abs(col - float(col_exact)) <= rel_tol * scale
    if check_bounds and not hyp:
        raise HypothesisUnmet(f"K={A.K}, K'={B.K} must both be >= p={p}", dec)
    if hyp:
        dec.checks["lambda00>=(K+1)(K'+1)/2q"] = lam00 >= Fraction((A.K + 1) * (B.K + 1), 2 * q)
        dec.checks["lambda0_row>=-3(K'+1)/q"] = row_exact >= Fraction(-3 * (B.K + 1), q)
        dec.checks["lambda0_col>=-3(K+1)/q"] = col_exact >= Fraction(-3 * (A.K + 1), q)
        dec.checks["|lambda_s|<=salie_block*sqrt(q)"] = abs(lam_s) <= SALIE_BLOCK * math.sqrt(q)
        dec.checks["lambda>=assembled_bound"] = float(exact) >= assembled_lower_bound(q, A.K, B.K)
    return dec


def salie_bound(h: int, hp: int, q: int) -> float:
    """2 sqrt 2 gcd(h, h', q)^(1/2) sqrt q."""
    return 2 * math.sqrt(2) * math.sqrt(math.gcd(h, hp, q)) * math.sqrt(q)


def salie_violations(q: int, slack: float = 1e-9) -> list[tuple[int, int, float, float]]:
    """All (h, h', |S|, bound) with h, h' != 0 and |S| above the bound."""
    absS = np.abs(kloosterman_table(q))
    g = np.gcd.outer(np.arange(q), np.arange(q))
    g = np.gcd(g, q)
    bound = 2 * math.sqrt(2) * np.sqrt(g * q)
    bad = absS[1:, 1:] > bound[1:, 1:] + slack
    return [(int(i) + 1, int(j) + 1, float(absS[i + 1, j + 1]), float(bound[i + 1, j + 1]))
            for i, j in zip(*np.nonzero(bad))]


def geometric_tail(p: int, n: int) -> tuple[float, float]:
    """(sum_{k<n} p^{-3k/2}, 1/(1 - p^{-3/2}))."""
    return math.fsum(p ** (-1.5 * k) for k in range(n)), 1 / (1 - p**-1.5)


def constant_collapse() -> tuple[float, float]:
    """(16 pi^2 sqrt 2 / (1 - 2^{-3/2}), 64 pi^2 / (2 sqrt 2 - 1)); the two are equal."""
    return 16 * math.pi**2 * math.sqrt(2) / (1 - 2**-1.5), SALIE_BLOCK


@dataclass
class InversePairReport:
    q: int
    A: tuple[int, int]
    B: tuple[int, int]
    hypotheses: dict[str, bool]
    vacuous: bool
    witness: tuple[int, int] | None
    K: int
    Kp: int
    lambda_value: Fraction
    margin: float

    @property
    def exists(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "A": {"lo": self.A[0], "length": self.A[1]},
            "B": {"lo": self.B[0], "length": self.B[1]},
            "hypotheses": self.hypotheses,
            "status": "vacuous" if self.vacuous else "hypotheses hold",
            "exists": self.exists,
            "witness": list(self.witness) if self.witness else None,
            "K": self.K,
            "Kp": self.Kp,
            "lambda": str(self.lambda_value),
            "positivity_margin": self.margin,
        }


def find_inverse_pair(q: int, A: tuple[int, int], B: tuple[int, int]) -> tuple[int, int] | None:
    """First y in A (from its low end) with z = -1/y in B."""
    level = PrimePowerLevel.from_q(q)
    blo, blen = B
    for i in range(A[1]):
        y = (A[0] + i) % q
        if y % level.p == 0:
            continue
        z = -pow(y, -1, q) % q
        if (z - blo) % q < blen:
            return y, z
    return None


def lemma7_verify(q: int, A: tuple[int, int], B: tuple[int, int], digits: int = 30) -> InversePairReport:
    """Check the hypotheses on two residue intervals given as (low end, length).

    The brute-force answer is always reported; if the hypotheses hold and no
    pair is found the lemma would be false, so that raises.
    """
    level = PrimePowerLevel.from_q(q)
    for lo, ln in (A, B):
        if not 1 <= ln <= q:
            raise ValueError(f"interval length {ln} out of range for q={q}")
    lo_size = max(11, 2 * level.p + 1)
    C8 = float(constant_C(digits)) / 8
    hyp = {
        "|A|>=max(11,2p+1)": A[1] >= lo_size,
        "|B|>=max(11,2p+1)": B[1] >= lo_size,
        "(|A|-11)(|B|-11)>144+(C/8)q^(3/2)":
            A[1] >= 11 and B[1] >= 11 and (A[1] - 11) * (B[1] - 11) > 144 + C8 * q**1.5,
    }
    K, Kp = min(A[1] // 2, (q - 1) // 2), min(B[1] // 2, (q - 1) // 2)
    if K and Kp:
        lam = lambda_exact(q, Window.from_interval(q, *A), Window.from_interval(q, *B))
    else:
        lam = Fraction(0)  # a single point carries no window
    margin = (K - 5) * (Kp - 5) - 36 - 2 * SALIE_BLOCK * q**1.5
    witness = find_inverse_pair(q, A, B)
    vacuous = not all(hyp.values())
    if (lam > 0) and witness is None:
        raise AssertionError("Lambda > 0 but no inverse pair found")
    if not vacuous and witness is None:
        raise AssertionError(f"hypotheses hold at q={q} but no pair y z = -1 exists")
    return InversePairReport(q, tuple(A), tuple(B), hyp, vacuous, witness, K, Kp, lam, margin)
