"""Command-line interface.

Every command prints one JSON document (sorted keys, floats rounded to a
fixed number of significant digits, rationals as strings) or, with
``--table``, a plain-text rendering of the same data.

Exit codes: 0 success, 1 negative verdict (criterion: dependent),
2 usage error, 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np
from sympy import isprime

from . import __version__
from .analytic import (
    DegenerateH,
    Window,
    find_inverse_pair,
    kloosterman,
    lambda_decompose,
    lambda_exact,
    salie_bound,
    theta_bound,
    theta_closed,
    theta_direct,
)
from .bounds import DEFAULT_DIGITS, bound_report, cascade_check
from .graph_paths import build_chemin_A, build_chemin_B, find_meeting, length_bounds
from .hecke import hecke_class, hecke_image, hecke_matrices
from .independence import criterion_verdict
from .modular_symbols import CACHE_ENV, PresentationCache
from .projective_line import LevelError, PrimePowerLevel, act, enumerate_points

log = logging.getLogger("kamienny")

FLOAT_DIGITS = 12
EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def canonical(obj: Any) -> Any:
    """Recursively convert to JSON-safe values with a fixed float format."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.{FLOAT_DIGITS}g}")
    if isinstance(obj, complex):
        return {"re": canonical(obj.real), "im": canonical(obj.imag)}
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2)


def render_table(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_cell(v)}")
    elif isinstance(obj, list):
        if obj and all(isinstance(r, dict) for r in obj):
            cols = sorted({c for r in obj for c in r})
            rows = [[_cell(r.get(c, "")) for c in cols] for r in obj]
            widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
            lines.append(pad + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
            for r in rows:
                lines.append(pad + "  ".join(x.ljust(w) for x, w in zip(r, widths)))
        else:
            lines.extend(f"{pad}- {_cell(v)}" for v in obj)
    else:
        lines.append(pad + _cell(obj))
    return "\n".join(lines)


def _flat_list(v: Any) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v) and len(v) <= 16


def _cell(v: Any) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


# ---------------------------------------------------------------- argument types


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def prime_int(text: str) -> int:
    v = positive_int(text)
    if not isprime(v):
        raise argparse.ArgumentTypeError(f"{v} is not prime")
    return v


def level_of(args) -> PrimePowerLevel:
    try:
        return PrimePowerLevel(args.p, args.n)
    except LevelError as exc:
        raise UsageError(f"argument --n: {exc}")


def level_from_q(q: int) -> PrimePowerLevel:
    try:
        return PrimePowerLevel.from_q(q)
    except LevelError as exc:
        raise UsageError(f"argument --q: {exc}")


# ---------------------------------------------------------------- commands


def cmd_p1_list(args, cache) -> tuple[dict, int]:
    level = level_of(args)
    pts = []
    for i, x in enumerate(enumerate_points(level)):
        pts.append({"index": i, "point": x.to_str(), "pair": list(x.pair(level)),
                    "sigma": act(x, "s", level).to_str(), "tau": act(x, "t", level).to_str()})
    return {"p": level.p, "n": level.n, "q": level.q, "size": level.size, "points": pts}, EXIT_OK


def cmd_hecke(args, cache) -> tuple[dict, int]:
    level = level_of(args)
    pres = cache.get(level)
    img = hecke_image(args.r, level)
    return {
        "p": level.p, "n": level.n, "r": args.r,
        "matrices": [list(m.as_tuple()) for m in hecke_matrices(args.r)],
        "image": [[x.to_str(), c] for x, c in img.items_sorted()],
        "class": list(hecke_class(args.r, pres).coordinates),
        "basis": [pres.generators[i].to_str() for i in pres.basis],
    }, EXIT_OK


def cmd_criterion(args, cache) -> tuple[dict, int]:
    level = level_of(args)
    if args.m is not None and args.all_m:
        raise UsageError("argument --m: not allowed with --all-m")
    if args.m is None and not args.all_m:
        raise UsageError("argument --m: one of --m M or --all-m is required")
    pres = cache.get(level)
    mode = "all-m" if args.all_m else "single-m"
    rep = criterion_verdict(pres, args.d, mode, args.m)
    out = rep.to_json()
    out["quotient_rank"] = pres.rank
    out["verdict"] = "independent" if rep.independent else "dependent"
    return out, EXIT_OK if rep.independent else EXIT_NEGATIVE


def cmd_paths(args, cache) -> tuple[dict, int]:
    level = level_of(args)
    if not 1 <= args.r <= args.D:
        raise UsageError(f"argument --r: need 1 <= r <= D, got r={args.r}, D={args.D}")
    A = build_chemin_A(level, args.r, args.D)
    B = build_chemin_B(level, args.r, args.D)
    bA, bB = length_bounds(level, args.D)
    meet = find_meeting(level, args.r, args.D, A, B)
    return {
        "p": level.p, "n": level.n, "r": args.r, "D": args.D,
        "chemin_A": A.to_json(), "chemin_B": B.to_json(),
        "bound_A": str(bA), "bound_B": str(bB),
        "A_meets_bound": A.interval_length >= bA,
        "B_meets_bound": B.interval_length >= bB,
        "in_regime_q>=26D^2": level.q >= 26 * args.D**2,
        "meeting": meet.to_json() if meet else None,
    }, EXIT_OK


def _window(q: int, a: int, K: int, flag: str) -> Window:
    try:
        return Window(q, a, K)
    except ValueError as exc:
        raise UsageError(f"argument {flag}: {exc}")


def cmd_lambda(args, cache) -> tuple[dict, int]:
    level = level_from_q(args.q)
    A = _window(level.q, args.a, args.K, "--K")
    B = _window(level.q, args.b, args.Kp, "--Kp")
    lam = lambda_exact(level.q, A, B)
    A_iv, B_iv = (A.a + 1, 2 * A.K), (B.a + 1, 2 * B.K)
    wit = find_inverse_pair(level.q, A_iv, B_iv)
    out: dict = {"q": level.q, "A": A.to_json(), "B": B.to_json(), "lambda": lam,
                 "lambda_float": float(lam), "positive": lam > 0,
                 "witness": list(wit) if wit else None}
    if args.decompose:
        out["decomposition"] = lambda_decompose(level.q, A, B, check_bounds=False).to_json()
    return out, EXIT_OK


def cmd_kloosterman(args, cache) -> tuple[dict, int]:
    level = level_from_q(args.q)
    q = level.q
    s = kloosterman(args.h, args.hp, q)
    out = {"q": q, "h": args.h, "hp": args.hp, "S": s, "abs": abs(s)}
    if args.h % q and args.hp % q:
        out["salie_bound"] = salie_bound(args.h, args.hp, q)
        out["within_salie_bound"] = abs(s) <= out["salie_bound"] + 1e-9
    return out, EXIT_OK


def cmd_theta(args, cache) -> tuple[dict, int]:
    level = level_from_q(args.q)
    q = level.q
    w = _window(q, args.a, args.K, "--K")
    h = args.h % q
    out: dict = {"q": q, "K": args.K, "a": w.a, "h": args.h, "direct": theta_direct(h, w)}
    try:
        out["closed"] = theta_closed(h, w)
    except DegenerateH:
        out["closed"] = None
        out["closed_limit"] = args.K + 1
    hs = min(h, q - h)
    out["bound"] = theta_bound(hs, args.K, q)
    out["bound_h"] = hs
    out["within_bound"] = out["direct"] <= out["bound"]
    return out, EXIT_OK


def cmd_bounds(args, cache) -> tuple[dict, int]:
    return bound_report(args.d, args.p, args.precision).to_json(), EXIT_OK


def cmd_cascade(args, cache) -> tuple[dict, int]:
    try:
        rep = cascade_check(args.q, args.D, args.p, args.precision)
    except ValueError as exc:
        raise UsageError(f"argument --q: {exc}")
    out = rep.to_json()
    out["final"] = rep.final
    return out, EXIT_OK


def cmd_cache_info(args, cache) -> tuple[dict, int]:
    return {"directory": str(cache.directory) if cache.directory else None,
            "env_var": CACHE_ENV, "entries": cache.entries()}, EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help=f"presentation cache directory (default ${CACHE_ENV})")
    common.add_argument("--precision", type=positive_int, default=DEFAULT_DIGITS,
                        help="decimal digits for interval arithmetic")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (the default)")
    fmt.add_argument("--table", action="store_true", help="human-readable output")
    common.add_argument("--manifest", type=Path, help="write a run manifest to this file")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="kamienny", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    def level_flags(sp):
        sp.add_argument("--p", type=prime_int, required=True)
        sp.add_argument("--n", type=positive_int, required=True)

    sp = add("p1-list", cmd_p1_list, "list P^1(Z/p^n Z) with sigma and tau images")
    level_flags(sp)

    sp = add("hecke", cmd_hecke, "Hecke matrices, image and homology class of T_r{0,oo}")
    level_flags(sp)
    sp.add_argument("--r", type=positive_int, required=True)

    sp = add("criterion", cmd_criterion, "independence of the first s*d Hecke images")
    level_flags(sp)
    sp.add_argument("--d", type=positive_int, required=True, help="number-field degree")
    sp.add_argument("--m", type=prime_int)
    sp.add_argument("--all-m", action="store_true")

    sp = add("paths", cmd_paths, "chemins A and B around 1/r")
    level_flags(sp)
    sp.add_argument("--r", type=positive_int, required=True)
    sp.add_argument("--D", type=positive_int, required=True)

    sp = add("lambda", cmd_lambda, "exact Lambda for two windows")
    sp.add_argument("--q", type=positive_int, required=True)
    sp.add_argument("--a", type=nonneg_int, required=True)
    sp.add_argument("--K", type=positive_int, required=True)
    sp.add_argument("--b", type=nonneg_int, required=True)
    sp.add_argument("--Kp", type=positive_int, required=True)
    sp.add_argument("--decompose", action="store_true")

    sp = add("kloosterman", cmd_kloosterman, "S(-h, -h'; q)")
    sp.add_argument("--q", type=positive_int, required=True)
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--hp", type=int, required=True)

    sp = add("theta", cmd_theta, "Theta(h): direct, closed form and majorant")
    sp.add_argument("--q", type=positive_int, required=True)
    sp.add_argument("--K", type=positive_int, required=True)
    sp.add_argument("--a", type=nonneg_int, required=True)
    sp.add_argument("--h", type=int, required=True)

    sp = add("bounds", cmd_bounds, "explicit constants and torsion bounds")
    sp.add_argument("--d", type=positive_int, required=True)
    sp.add_argument("--p", type=prime_int)

    sp = add("cascade", cmd_cascade, "sufficient conditions for the interval lemma")
    sp.add_argument("--q", type=positive_int, required=True)
    sp.add_argument("--D", type=positive_int, required=True)
    sp.add_argument("--p", type=prime_int, required=True)

    add("cache-info", cmd_cache_info, "list cached presentations")
    return parser


def _parameters(args) -> dict:
    skip = {"func", "command", "manifest", "json", "table", "verbose", "cache_dir"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.command == "cascade" and args.D < 2:
        print(f"kamienny: error: argument --D: must be >= 2, got {args.D}", file=sys.stderr)
        return EXIT_USAGE
    cache = PresentationCache(args.cache_dir)
    start = time.perf_counter()
    try:
        result, code = args.func(args, cache)
    except UsageError as exc:
        print(f"kamienny: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"kamienny: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    wall = time.perf_counter() - start
    text = dumps(result)
    print(render_table(json.loads(text)) if args.table else text)
    if args.manifest:
        manifest = {
            "command": args.command,
            "parameters": canonical(_parameters(args)),
            "version": __version__,
            "cache_hits": cache.hits,
            "cache_misses": cache.misses,
            "wall_time_s": round(wall, 6),
            "result_sha256": hashlib.sha256(text.encode()).hexdigest(),
        }
        args.manifest.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return code
