"""Compare the solver with exhaustive enumeration on random small instances."""

import argparse
import time

import numpy as np

from gbportfolio import Instance, SearchConfig, discrete_optimum
from gbportfolio.convex import border_risk
from gbportfolio.oracle import brute_force_optimum


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-budget", type=int, default=200)
    p.add_argument("--heuristic", default="repair")
    p.add_argument("--tie-break", default="revlex")
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)
    cfg = SearchConfig(approx_heuristic=args.heuristic, tie_break=args.tie_break)
    bad, t0 = 0, time.perf_counter()
    for case in range(args.cases):
        n = int(rng.choice([2, 3, 4]))
        a, mu = rng.integers(1, 21, n), rng.integers(1, 51, n)
        M = rng.normal(size=(n, n))
        om = M @ M.T / n + 0.1 * np.eye(n)
        B = int(rng.integers(10, args.max_budget + 1))
        rb, _ = border_risk(Instance(a, mu, om, B, 1.0))
        inst = Instance(a, mu, om, B, float(rb * np.exp(rng.uniform(np.log(0.05), np.log(5)))))
        rep = discrete_optimum(inst, cfg)
        x, ret, _ = brute_force_optimum(inst)
        if ret != rep.ret:
            bad += 1
            print(f"case {case}: solver {rep.ret} at {tuple(rep.optimum)}, oracle {ret} at {x}")
    print(f"{args.cases} cases, {bad} mismatches, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
