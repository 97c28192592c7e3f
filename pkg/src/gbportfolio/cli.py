"""Command-line front end: ``gbportfolio solve`` and ``gbportfolio border-risk``.

Instance files are CSV with the header ``ticker,price,return`` and integer
prices and returns; the covariance file holds n rows of n comma-separated
reals without a header, in the same asset order.
"""

import argparse
import csv
import json
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from .convex import border_risk
from .errors import (
    DimensionMismatch,
    EmptyIndexSet,
    InstanceError,
    ParseError,
    PortfolioError,
    TooLarge,
)
from .instance import Instance, risk_form, scale_instance, validate_instance
from .oracle import EnumerationBudget, brute_force_optimum
from .search import HEURISTICS, RHS_ROUNDINGS, SearchConfig, discrete_optimum
from .testset import DEFAULT_MAX_PAIRS, TIE_BREAKS

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILED = 2

INSTANCE_HEADER = ["ticker", "price", "return"]


def _parse_int(text, path, line, what):
    try:
        return int(text.strip())
    except ValueError:
        raise ParseError(f"{what} {text.strip()!r} is not an integer", path, line) from None


def read_assets(path):
    """Tickers, prices and returns from an instance CSV."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path) from None
    with fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip().lower() for c in rows[0]] != INSTANCE_HEADER:
        raise ParseError(f"header must be {','.join(INSTANCE_HEADER)}", path, 1)
    tickers, prices, returns = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, found {len(row)}", path, lineno)
        tickers.append(row[0].strip())
        prices.append(_parse_int(row[1], path, lineno, "price"))
        returns.append(_parse_int(row[2], path, lineno, "return"))
    if not tickers:
        raise ParseError("no assets", path)
    return tickers, prices, returns


def read_covariance(path):
    """Square matrix of reals, one comma-separated row per line."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path) from None
    out = []
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                out.append([float(c) for c in row])
            except ValueError:
                raise ParseError("non-numeric entry", path, lineno) from None
            if len(out[-1]) != len(out[0]):
                raise ParseError(f"row has {len(out[-1])} entries, expected {len(out[0])}",
                                 path, lineno)
    if not out:
        raise ParseError("empty covariance matrix", path)
    return np.array(out)


def load_instance(instance_path, covariance_path, B: int = 0, r0_sq: float = 0.0) -> Instance:
    """Read and validate an instance; B and r0_sq come from the command line."""
    tickers, prices, returns = read_assets(instance_path)
    omega = read_covariance(covariance_path)
    n = len(tickers)
    if omega.shape != (n, n):
        raise DimensionMismatch(
            f"{covariance_path}: covariance is {omega.shape[0]}x{omega.shape[1]}, "
            f"instance has {n} assets")
    inst = Instance(tuple(prices), tuple(returns), omega, int(B), float(r0_sq), tuple(tickers))
    return validate_instance(inst)


# --------------------------------------------------------------------------
# subcommands


def _config_from_args(args) -> SearchConfig:
    return SearchConfig(
        tol=args.tol, max_num_cuts=args.max_cuts, max_num_nodes=args.max_nodes,
        alpha=args.alpha, prec=args.prec, approx_heuristic=args.approx_heuristic,
        seed=args.seed, rhs_rounding=args.rhs_rounding, tie_break=args.tie_break,
        max_pairs=args.max_pairs,
    )


def cmd_solve(args, out=None) -> int:
    out = out or sys.stdout
    inst = load_instance(args.instance, args.cov, args.budget, args.risk)
    if args.scale_pow10:
        inst = scale_instance(inst, args.scale_pow10)
    config = _config_from_args(args)
    trace_fh = open(args.trace, "w") if args.trace else None
    try:
        trace = (lambda line: trace_fh.write(line + "\n")) if trace_fh else None
        report = discrete_optimum(inst, config, trace=trace)
    finally:
        if trace_fh:
            trace_fh.close()
    print(report.table(), file=out)
    doc = report.to_dict()
    if args.oracle_check:
        try:
            x, ret, count = brute_force_optimum(inst, EnumerationBudget())
            agree = ret == report.ret
            print(f"oracle: return {ret} at {tuple(x)} ({count} points) -> "
                  f"{'agrees' if agree else 'DISAGREES'}", file=out)
            doc["oracle"] = {"optimum": list(x), "return": int(ret), "agrees": bool(agree)}
        except TooLarge as exc:
            print(f"oracle: skipped ({exc})", file=out)
            doc["oracle"] = {"skipped": str(exc)}
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(doc, fh, indent=2)
    return EXIT_FAILED if report.status == "failed" else EXIT_OK


def cmd_border_risk(args, out=None) -> int:
    out = out or sys.stdout
    inst = load_instance(args.instance, args.cov, max(args.budget, 1), 0.0)
    r_b_sq, J = border_risk(inst, risk_form(inst))
    print(f"border risk r_b^2 = {r_b_sq:.6g}", file=out)
    print("J = {" + ", ".join(f"{j + 1}:{inst.label(j)}" for j in J) + "}", file=out)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gbportfolio",
                                description="Integer mean-variance portfolio solver.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--instance", "-i", required=True, help="CSV: ticker,price,return")
        sp.add_argument("--cov", "-c", required=True, help="CSV covariance matrix, no header")

    s = sub.add_parser("solve", help="compute the integer optimum")
    common(s)
    s.add_argument("--budget", type=int, required=True)
    s.add_argument("--risk", type=float, required=True, help="normalized risk level r0^2")
    s.add_argument("--max-cuts", type=int, default=4)
    s.add_argument("--max-nodes", type=int, default=10_000)
    s.add_argument("--tol", type=float, default=1e-4)
    s.add_argument("--prec", type=int, default=3)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--scale-pow10", type=int, default=0,
                   help="multiply prices, returns and budget by 10^k")
    s.add_argument("--approx-heuristic", choices=HEURISTICS, default="repair")
    s.add_argument("--trace", metavar="PATH", help="write one line per search node")
    s.add_argument("--json", metavar="PATH", help="write the report as JSON")
    s.add_argument("--oracle-check", action="store_true",
                   help="compare with exhaustive enumeration (small instances)")
    s.add_argument("--rhs-rounding", choices=RHS_ROUNDINGS, default="nearest",
                   help="rounding of each cut's right-hand side")
    s.add_argument("--tie-break", choices=TIE_BREAKS, default="revlex",
                   help="term-order tie-break among equal-return points")
    s.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS,
                   help="critical-pair ceiling of the test-set completion")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("border-risk", help="risk level below which budget stays unspent")
    common(b)
    b.add_argument("--budget", type=int, default=1)
    b.set_defaults(func=cmd_border_risk)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, InstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EmptyIndexSet as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except PortfolioError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
