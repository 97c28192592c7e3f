"""Test-set sizes of the worked examples under each tie-break."""

import argparse
import time

from gbportfolio.errors import ResourceExhausted
from gbportfolio.testset import TIE_BREAKS, SlackSystem, groebner_test_set

SYSTEMS = {
    "illustrative": SlackSystem(((6075, 3105), (12500, 10000)), (3832470, 487215),
                                (12500, 10000), (0, 1), (753, 191), ("budget", "return")),
    "illustrative+2 cuts": SlackSystem(
        ((6075, 3105), (12500, 10000), (545, 455), (567, 433)),
        (3832470, 487215, 21824, 21748), (12500, 10000), (0, 1), (753, 191),
        ("budget", "return", "cut", "cut")),
    "mixed": SlackSystem(((3522, 3676, 400000), (364, 364, 1000000)), (5_000_000, 3_384_834),
                         (364, 364, 1000000), (0, 1, 2), (0, 0, 0), ("budget", "return")),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-pairs", type=int, default=50_000)
    args = p.parse_args()
    for name, sys in SYSTEMS.items():
        for tb in TIE_BREAKS:
            t0 = time.perf_counter()
            try:
                size = str(len(groebner_test_set(sys, args.max_pairs, tie_break=tb)))
            except ResourceExhausted:
                size = f"> pair ceiling {args.max_pairs}"
            print(f"{name:>22} {tb:>8}: {size:>24}  ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
