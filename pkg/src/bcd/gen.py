"""Seeded random and exhaustive expression generation, plus random reduction walks."""

from __future__ import annotations

import random

from .rewrite import (
    ASSO,
    ASSO_INV,
    COMM,
    DIST,
    IDEM,
    Trace,
    absp,
    apply,
    dept,
    redexes,
)
from .syntax import Arrow, Atom, Expr, Meet, Polarity, polarity, subexpressions


def random_expr(rng: random.Random, size: int, atoms=("a", "b", "c")) -> Expr:
    """Random binary tree with the largest odd node count not above size."""
    internal = max(0, (size - 1) // 2)

    def build(k: int) -> Expr:
        if k == 0:
            return Atom(rng.choice(atoms))
        left = rng.randrange(k)
        a = build(left)
        b = build(k - 1 - left)
        return Arrow(a, b) if rng.random() < 0.5 else Meet(a, b)

    return build(internal)


def all_exprs(atoms, max_nodes: int) -> list:
    """Every expression over the atoms with at most max_nodes nodes."""
    by_size = {1: [Atom(a) for a in atoms]}
    out = list(by_size[1])
    for size in range(3, max_nodes + 1, 2):
        cur = []
        for lsize in range(1, size - 1, 2):
            rsize = size - 1 - lsize
            for a in by_size[lsize]:
                for b in by_size[rsize]:
                    cur.append(Arrow(a, b))
                    cur.append(Meet(a, b))
        by_size[size] = cur
        out.extend(cur)
    return out


def witness_pool(*exprs: Expr) -> list:
    pool = []
    seen = set()
    for e in exprs:
        for _, sub in subexpressions(e):
            if sub not in seen:
                seen.add(sub)
                pool.append(sub)
    return pool


def random_walk(
    rng: random.Random,
    start: Expr,
    max_steps: int,
    witnesses=None,
    dept_depth=None,
    absp_prob: float = 0.25,
) -> Trace:
    """Random restricted reduction of up to max_steps steps.

    Uses the meet rules plus dist, absp with witnesses drawn from the pool
    (by default the subexpressions of start), and, when dept_depth is given,
    restricted depth truncation at that parameter.
    """
    trace = Trace(start)
    pool = witnesses if witnesses is not None else witness_pool(start)
    for _ in range(rng.randint(0, max_steps)):
        cur = trace.final
        rules = [ASSO, ASSO_INV, COMM, IDEM, DIST]
        if pool and rng.random() < absp_prob:
            rules.append(absp(rng.choice(pool)))
        if dept_depth is not None:
            rules.append(dept(dept_depth))
        rng.shuffle(rules)
        for rule in rules:
            positions = redexes(cur, rule, restricted=True)
            if positions:
                trace = trace.extend(rule, rng.choice(positions))
                break
        else:
            break
    return trace


def random_strictly_positive_step(
    rng: random.Random, e: Expr, witnesses=None
):
    """One random restricted reduction step at a strictly positive position.

    Returns (rule, position, result); atoms always admit at least an idem
    step at the root, so this never fails.
    """
    pool = witnesses if witnesses is not None else witness_pool(e)
    rules = [ASSO, ASSO_INV, COMM, IDEM, DIST, absp(rng.choice(pool))]
    options = []
    for rule in rules:
        for pos in redexes(e, rule, restricted=True):
            if polarity(e, pos) is Polarity.STRICTLY_POSITIVE:
                options.append((rule, pos))
    rule, pos = rng.choice(options)
    return rule, pos, apply(e, rule, pos)
