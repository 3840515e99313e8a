"""Run the chemin constancy check on actual mod-m dependencies.

For each level and prime m the first dependency among T_1..T_d (d one past
the independence range) is padded with zeros up to a few extra indices,
and the verdict of verify_elimination is tallied.

    python scripts/elimination_survey.py --levels 25 49 121 169 243 343
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass, field

from kamienny.graph_paths import verify_elimination
from kamienny.independence import max_independent_d, rank_mod_m
from kamienny.modular_symbols import PresentationCache
from kamienny.projective_line import PrimePowerLevel


@dataclass
class SurveyConfig:
    levels: list[int] = field(default_factory=lambda: [25, 27, 49, 81, 121, 125, 169, 243, 343])
    primes: list[int] = field(default_factory=lambda: [2, 3, 5, 7])
    padding: int = 4


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=SurveyConfig().levels)
    ap.add_argument("--primes", type=int, nargs="+", default=SurveyConfig().primes)
    ap.add_argument("--padding", type=int, default=4)
    args = ap.parse_args(argv)
    cache = PresentationCache(None)
    tally = Counter()
    print("q,m,r,lambda,forced,reason")
    for q in args.levels:
        P = cache.get(PrimePowerLevel.from_q(q))
        for m in args.primes:
            d = max_independent_d(P, "single-m", m) + 1
            if d > P.rank:
                continue
            _, w = rank_mod_m(P, d, m)
            for extra in range(args.padding + 1):
                lam = w + [0] * extra
                v = verify_elimination(P, len(lam), lam, m)
                tally[v.forced] += 1
                print(f"{q},{m},{len(lam)},{' '.join(map(str, lam))},{v.forced},{v.reason}")
    print(f"# forced: {tally[True]}, inconclusive: {tally[False]}")


if __name__ == "__main__":
    main()
