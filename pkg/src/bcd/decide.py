"""Polynomial-time decision of the intersection type preorder by factor matching.

a is below b exactly when every factor of b finds a factor of a with the same
head atom and the same arity whose arguments dominate pointwise in the
contravariant direction: the b-side argument must be below the a-side
argument.  The recursion terminates because factor arguments are proper
subexpressions, and it needs no prior normalization since the factor
recursion already distributes arrows over meets.

Two implementations are provided: a memoized recursion on subexpression pairs
(the workhorse) and an explicit Boolean matrix over the DFS-numbered
subexpressions of a root, filled in decreasing order of index sum so that
every factor-argument lookup is already available.  They agree pointwise.

"@" receives no special treatment here.

Results are pure; a DecisionCache may be shared freely, including across
threads, and behaves as if each query were evaluated in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .factors import Factor, factor_to_expr, factors
from .syntax import Atom, Expr, Meet, render


class DecisionCache:
    """Memo table for subtype queries over a family of related expressions."""

    __slots__ = ("_sub", "_facts", "_grouped")

    def __init__(self):
        self._sub = {}
        self._facts = {}
        self._grouped = {}

    def _factors(self, e: Expr) -> frozenset:
        fs = self._facts.get(e)
        if fs is None:
            if isinstance(e, Atom):
                fs = frozenset([Factor((), e.name)])
            elif isinstance(e, Meet):
                fs = self._factors(e.left) | self._factors(e.right)
            else:
                src = e.source
                fs = frozenset(
                    Factor((src,) + f.args, f.head) for f in self._factors(e.target)
                )
            self._facts[e] = fs
        return fs

    def _group(self, e: Expr) -> dict:
        g = self._grouped.get(e)
        if g is None:
            g = {}
            for f in self._factors(e):
                g.setdefault((f.head, f.arity), []).append(f.args)
            self._grouped[e] = g
        return g

    def subseteq(self, a: Expr, b: Expr) -> bool:
        key = (a, b)
        memo = self._sub
        v = memo.get(key)
        if v is not None:
            return v
        if a == b:
            memo[key] = True
            return True
        ga = self._group(a)
        v = True
        for ha, blists in self._group(b).items():
            alist = ga.get(ha)
            if alist is None:
                v = False
                break
            for bargs in blists:
                if not any(
                    all(self.subseteq(bargs[k], aargs[k]) for k in range(len(bargs)))
                    for aargs in alist
                ):
                    v = False
                    break
            if not v:
                break
        memo[key] = v
        return v

    def equiv(self, a: Expr, b: Expr) -> bool:
        return self.subseteq(a, b) and self.subseteq(b, a)


def subseteq(a: Expr, b: Expr) -> bool:
    """True iff a is below b in the preorder."""
    return DecisionCache().subseteq(a, b)


def equiv(a: Expr, b: Expr) -> bool:
    """True iff a and b are mutually below each other."""
    cache = DecisionCache()
    return cache.subseteq(a, b) and cache.subseteq(b, a)


# ---------------------------------------------------------------------------
# Explicit matrix form

@dataclass(frozen=True)
class SubtypeMatrix:
    """Square Boolean matrix over the DFS-numbered subexpressions of a root.

    bits[i][j] is 1 exactly when subexpression i is below subexpression j;
    the diagonal is reflexive and the relation is transitive.
    """

    exprs: tuple
    bits: tuple  # tuple of bytes rows

    @property
    def size(self) -> int:
        return len(self.exprs)

    def holds(self, i: int, j: int) -> bool:
        return bool(self.bits[i][j])


def numbered_factors(root: Expr):
    """Preorder subexpression list plus per-node factor sets whose arguments
    are expressed as node indices.

    Factor argument indices are always strictly larger than the node's own
    index, which is what lets the matrix fill entries in decreasing order of
    index sum.
    """
    exprs = []
    facts = []

    def visit(e: Expr) -> int:
        idx = len(exprs)
        exprs.append(e)
        facts.append(None)
        if isinstance(e, Atom):
            fs = frozenset([(e.name, ())])
        elif isinstance(e, Meet):
            li = visit(e.left)
            ri = visit(e.right)
            fs = facts[li] | facts[ri]
        else:
            si = visit(e.source)
            ti = visit(e.target)
            fs = frozenset((head, (si,) + args) for head, args in facts[ti])
        facts[idx] = fs
        return idx

    visit(root)
    for idx, fs in enumerate(facts):
        for _, args in fs:
            assert all(k > idx for k in args), "factor argument below its node"
    return exprs, facts


def subtype_matrix(root: Expr) -> SubtypeMatrix:
    """Fill the full subexpression-pair matrix of the root.

    Entries are computed in decreasing order of index sum i+j, each decided
    by factor matching over already-filled deeper pairs; structurally equal
    subexpression pairs share one computation.  Agrees pointwise with
    subseteq on every pair.
    """
    exprs, facts = numbered_factors(root)
    n = len(exprs)

    grouped = []
    keysets = []
    for fs in facts:
        g = {}
        for head, args in fs:
            g.setdefault((head, len(args)), []).append(args)
        grouped.append(g)
        keysets.append(frozenset(g))

    rows = [bytearray(n) for _ in range(n)]

    classes = {}
    cls = [0] * n
    for i, e in enumerate(exprs):
        cls[i] = classes.setdefault(e, len(classes))

    pair_cache = {}
    for s in range(2 * n - 2, -1, -1):
        for i in range(max(0, s - n + 1), min(n - 1, s) + 1):
            j = s - i
            key = (cls[i], cls[j])
            v = pair_cache.get(key)
            if v is None:
                if key[0] == key[1]:
                    v = 1
                elif not keysets[j] <= keysets[i]:
                    v = 0
                else:
                    v = _matrix_entry(grouped[i], grouped[j], rows)
                pair_cache[key] = v
            rows[i][j] = v
    return SubtypeMatrix(tuple(exprs), tuple(bytes(r) for r in rows))


def _matrix_entry(gi: dict, gj: dict, rows) -> int:
    for ha, blists in gj.items():
        alist = gi[ha]
        for bargs in blists:
            ok = False
            for aargs in alist:
                matched = True
                for k in range(len(bargs)):
                    if not rows[bargs[k]][aargs[k]]:
                        matched = False
                        break
                if matched:
                    ok = True
                    break
            if not ok:
                return 0
    return 1


# ---------------------------------------------------------------------------
# Explanations

def _sorted_factors(e: Expr) -> list:
    return sorted(factors(e), key=lambda f: (f.head, f.arity, render(factor_to_expr(f))))


def explain(a: Expr, b: Expr) -> dict:
    """Factor-matching tree justifying subseteq(a, b), as plain data."""
    obligations = []
    holds = True
    fas = _sorted_factors(a)
    for fb in _sorted_factors(b):
        matched = None
        for fa in fas:
            if fa.head != fb.head or fa.arity != fb.arity:
                continue
            subtrees = [explain(fb.args[k], fa.args[k]) for k in range(fb.arity)]
            if all(t["holds"] for t in subtrees):
                matched = {"factor": render(factor_to_expr(fa)), "args": subtrees}
                break
        if matched is None:
            holds = False
        obligations.append(
            {"factor": render(factor_to_expr(fb)), "matched": matched}
        )
    return {
        "sub": render(a),
        "sup": render(b),
        "holds": holds,
        "obligations": obligations,
    }
