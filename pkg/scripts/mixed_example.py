"""Stock/future mix for three budgets, both start heuristics, with the oracle optimum."""

import argparse
import pathlib
import time

from gbportfolio import SearchConfig, discrete_optimum
from gbportfolio.cli import load_instance
from gbportfolio.oracle import EnumerationBudget, brute_force_optimum

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--budgets", type=int, nargs="+", default=[5_000_000, 7_500_000, 10_000_000],
                   help="budgets in scaled units (prices x 100)")
    p.add_argument("--heuristics", nargs="+", default=["concentrate", "repair"])
    p.add_argument("--max-nodes", type=int, default=50_000)
    p.add_argument("--no-oracle", action="store_true")
    args = p.parse_args()
    print(f"{'budget':>8} {'heuristic':>11} {'start':>18} {'optimum':>18} {'return':>10} "
          f"{'oracle':>10} {'nodes':>7} {'time':>7}  status")
    for B in args.budgets:
        inst = load_instance(DATA / "mixed.csv", DATA / "mixed_cov.csv", B, 1.52)
        oracle = None
        if not args.no_oracle:
            oracle = brute_force_optimum(inst, EnumerationBudget(10**9, 1200))[1]
        for h in args.heuristics:
            t0 = time.perf_counter()
            rep = discrete_optimum(inst, SearchConfig(approx_heuristic=h,
                                                      max_num_nodes=args.max_nodes))
            dt = time.perf_counter() - t0
            orc = f"{oracle / 100:.2f}" if oracle is not None else "-"
            print(f"{B // 100:>8} {h:>11} {str(tuple(rep.initial)):>18} "
                  f"{str(tuple(rep.optimum)):>18} {rep.ret / 100:>10.2f} {orc:>10} "
                  f"{rep.total_nodes:>7} {dt:>7.1f}  {rep.status}"
                  f"{' (proven)' if rep.proven else ''}")


if __name__ == "__main__":
    main()
