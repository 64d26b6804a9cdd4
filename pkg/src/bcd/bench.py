"""Wall-clock benchmarks for the decision procedure and the subtype matrix."""

from __future__ import annotations

import math
import random
import sys
import time

from .decide import DecisionCache, subtype_matrix
from .gen import random_expr
from .syntax import node_count


def _ensure_recursion_room(limit: int = 20000) -> None:
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)


def time_matrix(size: int, seed: int = 0, atoms=("a", "b", "c"), repeats: int = 1) -> tuple:
    """Best-of-repeats wall time of subtype_matrix on a random instance.

    Returns (actual node count, seconds).
    """
    _ensure_recursion_room()
    rng = random.Random(seed)
    root = random_expr(rng, size, atoms)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        subtype_matrix(root)
        best = min(best, time.perf_counter() - t0)
    return node_count(root), best


def scaling_run(sizes=(200, 400, 800, 1600), seed: int = 0, repeats: int = 1) -> list:
    """(node count, seconds) pairs for subtype_matrix across instance sizes."""
    return [time_matrix(size, seed=seed + size, repeats=repeats) for size in sizes]


def fitted_exponent(pairs) -> float:
    """Least-squares slope of log(time) against log(nodes)."""
    xs = [math.log(n) for n, _ in pairs]
    ys = [math.log(max(t, 1e-9)) for _, t in pairs]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    var = sum((x - mx) ** 2 for x in xs)
    if var == 0:
        raise ValueError("need at least two distinct instance sizes to fit")
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return cov / var


def time_decision(total_nodes: int = 1000, seed: int = 0, atoms=("a", "b", "c")) -> float:
    """Wall time of one subtype decision on a pair totalling total_nodes nodes."""
    _ensure_recursion_room()
    rng = random.Random(seed)
    a = random_expr(rng, total_nodes // 2, atoms)
    b = random_expr(rng, total_nodes // 2, atoms)
    cache = DecisionCache()
    t0 = time.perf_counter()
    cache.subseteq(a, b)
    cache.subseteq(b, a)
    return time.perf_counter() - t0
