#!/usr/bin/env python3
"""Scaling experiment: subtype matrix wall times and the fitted growth exponent.

Usage: python scripts/run_benchmarks.py [--sizes 200,400,800,1600] [--seed 0]
       [--repeats 3]
"""

import argparse

from bcd.bench import fitted_exponent, scaling_run, time_decision


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="200,400,800,1600")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    pairs = scaling_run(sizes, seed=args.seed, repeats=args.repeats)
    print(f"{'nodes':>8} {'seconds':>10}")
    for n, t in pairs:
        print(f"{n:>8} {t:>10.4f}")
    if len({n for n, _ in pairs}) >= 2:
        print(f"fitted exponent: {fitted_exponent(pairs):.3f}")
    t = time_decision(1000, seed=args.seed)
    print(f"single 1000-node decision: {t * 1000:.2f} ms")


if __name__ == "__main__":
    main()
