"""Command-line driver tying constructions, exact analysis, and Monte Carlo
runs into reproducible file-producing experiments.

All randomness flows from --seed (default 101, fixed so reruns are
byte-identical); relative output paths honor the EXITLAB_OUTDIR environment
variable.  Exit codes: 0 success, 1 invalid input, 2 a property check
failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import families, montecarlo, symmetry
from .codes import EnumerationBudgetError, LinearCode, load_code, save_code
from .exit_exact import (area_exact, exit_polynomial_exact,
                         influence_profile_exact)

DEFAULT_SEED = 101
DEFAULT_WITNESS_SAMPLES = 100


class CliError(Exception):
    """Invalid invocation or input; maps to exit code 1."""


def _out_path(path: str) -> str:
    base = os.environ.get("EXITLAB_OUTDIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def parse_grid(spec: str) -> np.ndarray:
    """Parse 'a:b:s' (inclusive of both ends, within s/2) or 'p1,p2,...'."""
    try:
        if ":" in spec:
            a, b, s = (float(x) for x in spec.split(":"))
            if s <= 0 or b < a:
                raise ValueError
            count = int(np.floor((b - a) / s + 0.5))
            grid = a + s * np.arange(count + 1)
            grid = grid[grid <= b + s / 2]
        else:
            grid = np.array([float(x) for x in spec.split(",")])
    except ValueError:
        raise CliError(f"malformed grid spec {spec!r}") from None
    if grid.size == 0 or np.any((grid < 0) | (grid > 1)) or np.any(np.diff(grid) <= 0):
        raise CliError(f"grid {spec!r} must be increasing and within [0, 1]")
    return grid


def _add_code_args(parser: argparse.ArgumentParser):
    parser.add_argument("--family", choices=["rm", "bch", "ebch"],
                        help="code family to construct")
    parser.add_argument("--v", type=int, help="family order parameter")
    parser.add_argument("--m", type=int, help="family size parameter")
    parser.add_argument("--code-file", help="JSON code file (alternative to --family)")


def _build_code(args) -> LinearCode:
    if args.code_file:
        try:
            return load_code(_out_path(args.code_file))
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(f"cannot load code file: {exc}") from exc
    if not args.family:
        raise CliError("provide --family with --v/--m, or --code-file")
    if args.v is None or args.m is None:
        raise CliError("--family requires both --v and --m")
    try:
        if args.family == "rm":
            return families.reed_muller(args.v, args.m)
        if args.family == "bch":
            return families.bch(args.v, args.m)
        return families.ebch(args.v, args.m)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _describe_distance(code: LinearCode) -> str:
    if code.d_min_known is not None:
        return f"{code.d_min_known} (exact)"
    if code.k == 0:
        return "undefined (zero code)"
    if code.k <= 16:
        return f"{code.min_distance_exhaustive()} (exact)"
    if code.d_min_designed is not None:
        return f">= {code.d_min_designed} (designed)"
    return "unknown"


def cmd_construct(args) -> int:
    code = _build_code(args)
    print(f"{code.name}: N={code.n} K={code.k} rate={code.rate} "
          f"d_min={_describe_distance(code)}")
    if args.out:
        save_code(code, _out_path(args.out))
        print(f"wrote {args.out}")
    return 0


def cmd_exit_exact(args) -> int:
    code = _build_code(args)
    try:
        if args.bit is None:
            polys = [exit_polynomial_exact(code, i) for i in range(code.n)]
            counts = [sum(p.counts[w] for p in polys)
                      for w in range(code.n)]
            payload = {"i": "avg", "counts": counts, "divisor": code.n,
                       "area": str(Fraction(code.k, code.n))}
        else:
            poly = exit_polynomial_exact(code, args.bit)
            payload = {"i": args.bit, "counts": list(poly.counts),
                       "area": str(Fraction(code.k, code.n))}
    except (EnumerationBudgetError, IndexError) as exc:
        raise CliError(str(exc)) from exc
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(_out_path(args.out), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_area_check(args) -> int:
    code = _build_code(args)
    try:
        area = area_exact(code)
    except EnumerationBudgetError as exc:
        raise CliError(str(exc)) from exc
    expected = Fraction(code.k, code.n)
    if area == expected:
        print(f"area = {area} == K/N")
        return 0
    print(f"area = {area} != K/N = {expected}", file=sys.stderr)
    return 2


def cmd_symmetry_check(args) -> int:
    if args.code_file:
        raise CliError("symmetry-check constructs its witnesses from family "
                       "parameters; use --family rm or --family ebch")
    if args.family not in ("rm", "ebch"):
        raise CliError("symmetry-check needs --family rm or --family ebch")
    code = _build_code(args)
    checks = []

    if code.n <= 16:
        polys = [exit_polynomial_exact(code, i) for i in range(code.n)]
        same = all(p == polys[0] for p in polys)
        checks.append({"name": "exit_functions_identical", "passed": same})
        prof_ok = True
        for i in range(code.n):
            prof = influence_profile_exact(code, i)
            vals = list(prof.counts.values())
            if any(v != vals[0] for v in vals):
                prof_ok = False
                break
        checks.append({"name": "influences_identical_per_bit", "passed": prof_ok})

    rng = np.random.Generator(np.random.Philox(key=[args.seed, 0]))
    failures = 0
    for _ in range(args.witness_samples):
        i, j, k = rng.choice(code.n, size=3, replace=False)
        perm = symmetry.double_transitivity_witness(args.family, args.m,
                                                    int(i), int(j), int(k))
        if perm(int(i)) != int(i) or perm(int(j)) != int(k) \
                or not symmetry.is_automorphism(code, perm):
            failures += 1
    checks.append({"name": "double_transitivity_witnesses",
                   "passed": failures == 0,
                   "samples": args.witness_samples, "failures": failures})

    payload = {"code": code.name, "checks": checks}
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(_out_path(args.out), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(c["passed"] for c in checks) else 2


def cmd_mc(args) -> int:
    code = _build_code(args)
    grid = parse_grid(args.grid)
    try:
        curve = montecarlo.run_curve(code, grid, args.trials, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out = _out_path(args.out)
    montecarlo.write_curve_csv(curve, out)
    print(f"wrote {args.out} ({grid.size} grid points x {args.trials} trials)")
    return 0


def cmd_threshold(args) -> int:
    try:
        curve = montecarlo.read_curve_csv(_out_path(args.curve))
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read curve: {exc}") from exc
    if args.n is not None:
        m_count = args.n - 1
    else:
        code = _build_code(args)
        m_count = code.n - 1
    if m_count < 2:
        raise CliError("code must have at least 3 positions")
    try:
        report = montecarlo.threshold_report(curve, args.eps, m_count=m_count)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    text = json.dumps(report.to_json_dict(), indent=2)
    if args.out:
        with open(_out_path(args.out), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exitlab",
        description="Erasure-channel code laboratory: construction, exact "
                    "EXIT analysis, Monte Carlo curves, threshold reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and emit its JSON file")
    _add_code_args(p)
    p.add_argument("--out", help="output JSON path")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("exit-exact", help="exact EXIT weight counts for one "
                                          "bit or the bit average")
    _add_code_args(p)
    p.add_argument("--bit", type=int, default=None,
                   help="bit index; omit for the average over bits")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_exit_exact)

    p = sub.add_parser("area-check", help="assert the exact EXIT area equals K/N")
    _add_code_args(p)
    p.set_defaults(func=cmd_area_check)

    p = sub.add_parser("symmetry-check", help="EXIT symmetry and witness checks")
    _add_code_args(p)
    p.add_argument("--witness-samples", type=int, default=DEFAULT_WITNESS_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"witness-sampling seed (default {DEFAULT_SEED})")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_symmetry_check)

    p = sub.add_parser("mc", help="Monte Carlo recovery curve to CSV")
    _add_code_args(p)
    p.add_argument("--grid", required=True,
                   help="erasure grid, 'a:b:s' (inclusive) or 'p1,p2,...'")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"master seed (default {DEFAULT_SEED})")
    p.add_argument("--threads", type=int, default=1,
                   help="cap on worker parallelism; results do not depend on it")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("threshold", help="transition report from a curve CSV")
    _add_code_args(p)
    p.add_argument("--curve", required=True, help="CSV produced by `mc`")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n", type=int, default=None,
                   help="code length (alternative to a code spec)")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_threshold)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) is not None and getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
