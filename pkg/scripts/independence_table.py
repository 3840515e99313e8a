"""Largest d with T_1{0,oo}..T_d{0,oo} independent, over Z and mod small primes.

    python scripts/independence_table.py --levels 25 27 32 49 121 125 128 169 243
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

from kamienny.independence import max_independent_d
from kamienny.modular_symbols import PresentationCache
from kamienny.projective_line import PrimePowerLevel


@dataclass
class TableConfig:
    levels: list[int] = field(default_factory=lambda: [25, 27, 32, 49, 121, 125, 128, 169, 243])
    primes: list[int] = field(default_factory=lambda: [2, 3, 5, 7, 11, 13])
    cache_dir: str | None = None


def run(cfg: TableConfig):
    cache = PresentationCache(cfg.cache_dir)
    for q in cfg.levels:
        P = cache.get(PrimePowerLevel.from_q(q))
        row = {"q": q, "rank": P.rank, "all_m": max_independent_d(P, "all-m")}
        for m in cfg.primes:
            row[f"m={m}"] = max_independent_d(P, "single-m", m)
        yield row


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=TableConfig().levels)
    ap.add_argument("--primes", type=int, nargs="+", default=TableConfig().primes)
    ap.add_argument("--cache-dir")
    args = ap.parse_args(argv)
    cfg = TableConfig(args.levels, args.primes, args.cache_dir)
    rows = list(run(cfg))
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)


if __name__ == "__main__":
    main()
