"""Worst ratio |S(-h,-h';q)| / (2 sqrt 2 gcd(h,h',q)^(1/2) sqrt q) over all h, h' != 0.

    python scripts/salie_sweep.py --levels 9 25 27 49 121 125 128 243 256 729
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from kamienny.analytic import kloosterman_table


def worst_ratio(q: int) -> tuple[float, int, int]:
    S = np.abs(kloosterman_table(q))[1:, 1:]
    g = np.gcd(np.gcd.outer(np.arange(1, q), np.arange(1, q)), q)
    ratio = S / (2 * math.sqrt(2) * np.sqrt(g * q))
    i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
    return float(ratio[i, j]), int(i) + 1, int(j) + 1


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=[9, 25, 27, 49, 121, 125, 128, 243, 256, 729])
    args = ap.parse_args(argv)
    print("q,worst_ratio,h,hp")
    for q in args.levels:
        r, h, hp = worst_ratio(q)
        print(f"{q},{r:.6f},{h},{hp}")


if __name__ == "__main__":
    main()
