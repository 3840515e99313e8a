"""How far desk-scale levels are from the positivity criterion for Lambda.

For each q, take A = B = the longest allowed interval and compare the exact
Lambda with the assembled lower bound and with the criterion margin.

    python scripts/positivity_margin.py --levels 81 243 729 2187 625 512
"""

from __future__ import annotations

import argparse
import math

from kamienny.analytic import SALIE_BLOCK, Window, assembled_lower_bound, lambda_decompose
from kamienny.bounds import constant_C


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=[81, 243, 729, 2187, 125, 625, 128, 512])
    args = ap.parse_args(argv)
    C = float(constant_C())
    print("q,K,lambda_exact,lambda00,lambda_s,assembled_bound,criterion_margin")
    for q in args.levels:
        K = (q - 1) // 2
        w = Window(q, 0, K)
        dec = lambda_decompose(q, w, w)
        margin = (K - 5) ** 2 - 36 - 2 * SALIE_BLOCK * q**1.5
        print(f"{q},{K},{float(dec.lambda_exact):.6g},{float(dec.lambda00):.6g},{dec.lambda_s:.6g},"
              f"{assembled_lower_bound(q, K, K):.6g},{margin:.6g}")
    # with K ~ q/2 the margin is about q^2/4 - (C/32) q^(3/2)
    print(f"# margin turns positive only near q ~ (C/8)^2 = {math.ceil((C / 8) ** 2)}")


if __name__ == "__main__":
    main()
