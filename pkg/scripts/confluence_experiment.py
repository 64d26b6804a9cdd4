#!/usr/bin/env python3
"""Randomized joinability experiment: diverge from a common source with
restricted reduction steps, then rejoin with the bounded conversion search.

Usage: python scripts/confluence_experiment.py [--peaks 1000] [--steps 4]
       [--nodes 12] [--budget 4000] [--seed 0]
"""

import argparse
import random
import time
from collections import Counter

from bcd.gen import random_expr, random_walk, witness_pool
from bcd.rewrite import convertible_bounded


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--peaks", type=int, default=1000)
    ap.add_argument("--steps", type=int, default=4)
    ap.add_argument("--nodes", type=int, default=12)
    ap.add_argument("--budget", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    verdicts: Counter = Counter()
    rules_used: Counter = Counter()
    t0 = time.perf_counter()
    for _ in range(args.peaks):
        src = random_expr(rng, rng.randint(1, args.nodes), ("a", "b", "c"))
        pool = witness_pool(src)
        left = random_walk(rng, src, args.steps, witnesses=pool)
        right = random_walk(rng, src, args.steps, witnesses=pool)
        for step in left.steps + right.steps:
            rules_used[step.rule.kind] += 1
        verdict = convertible_bounded(
            left.final,
            right.final,
            budget=args.budget,
            witnesses=witness_pool(src, left.final, right.final),
        )
        verdicts[verdict.value] += 1
    elapsed = time.perf_counter() - t0
    print(f"{args.peaks} peaks in {elapsed:.1f}s")
    print(f"verdicts: {dict(verdicts)}")
    print(f"rules used in walks: {dict(rules_used)}")


if __name__ == "__main__":
    main()
