"""Chemin interval lengths against their guaranteed lower bounds, as CSV.

Also reports whether the two chemins meet (a pair y z = -1 in the intervals).

    python scripts/path_bounds_sweep.py --levels 243 729 625 343 512 1024 --max-D 4
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

from kamienny.graph_paths import build_chemin_A, build_chemin_B, find_meeting, length_bounds
from kamienny.projective_line import PrimePowerLevel


@dataclass
class SweepConfig:
    levels: list[int] = field(default_factory=lambda: [3**5, 3**6, 5**4, 7**3, 2**9, 2**10])
    max_D: int = 4
    regime_only: bool = True  # keep q >= 26 D^2


def sweep(cfg: SweepConfig):
    for q in cfg.levels:
        L = PrimePowerLevel.from_q(q)
        for D in range(1, cfg.max_D + 1):
            if cfg.regime_only and q < 26 * D * D:
                continue
            bA, bB = length_bounds(L, D)
            for r in range(1, D + 1):
                A, B = build_chemin_A(L, r, D), build_chemin_B(L, r, D)
                meet = find_meeting(L, r, D, A, B)
                yield {
                    "q": q, "r": r, "D": D,
                    "len_A": A.interval_length, "bound_A": round(float(bA), 3),
                    "len_B": B.interval_length, "bound_B": round(float(bB), 3),
                    "B_step": B.step,
                    "ok": A.interval_length >= bA and B.interval_length >= bB,
                    "meeting_y": meet.y if meet else "",
                }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=SweepConfig().levels)
    ap.add_argument("--max-D", type=int, default=4)
    ap.add_argument("--all", action="store_true", help="include q < 26 D^2")
    args = ap.parse_args(argv)
    rows = list(sweep(SweepConfig(args.levels, args.max_D, not args.all)))
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    bad = [r for r in rows if not r["ok"]]
    print(f"# {len(rows)} cases, {len(bad)} below bound (r values: {sorted({r['r'] for r in bad})})", file=sys.stderr)


if __name__ == "__main__":
    main()
