"""Two-asset worked example: full solve with the node trace, then the two-cut variant."""

import argparse
import pathlib

from gbportfolio import SearchConfig, discrete_optimum
from gbportfolio.cli import load_instance

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--budget", type=int, default=9_000_000)
    p.add_argument("--risk", type=float, default=3e-5)
    args = p.parse_args()
    inst = load_instance(DATA / "illustrative.csv", DATA / "illustrative_cov.csv",
                         args.budget, args.risk)
    print("== default settings ==")
    print(discrete_optimum(inst, SearchConfig(), trace=print).table())
    print("\n== two cuts forced (tol = 0) ==")
    print(discrete_optimum(inst, SearchConfig(tol=0.0, max_num_cuts=2), trace=print).table())


if __name__ == "__main__":
    main()
