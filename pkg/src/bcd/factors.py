"""Factors: maximal strictly positive unrollings args(1) -> (... (args(t) -> head) ...).

An expression with no arrow targeting a meet is an intersection of such
unrollings with atomic heads; the factors recursion extracts them from any
expression directly, distributing arrow sources over meet targets as it goes.
Here "@" is not distinguished from other atoms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import Arrow, Atom, Expr, Meet


@dataclass(frozen=True, eq=False, repr=False)
class Factor:
    args: tuple  # tuple of Expr, outermost argument first; () means a bare atom
    head: str

    def __post_init__(self):
        object.__setattr__(
            self, "_hash", hash(("factor", tuple(hash(a) for a in self.args), self.head))
        )

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (
            type(other) is Factor
            and other._hash == self._hash
            and other.head == self.head
            and other.args == self.args
        )

    def __repr__(self):
        return f"Factor({self.args!r}, {self.head!r})"

    @property
    def arity(self) -> int:
        return len(self.args)


def factors(e: Expr) -> frozenset:
    """The factor set of e.

    factors(p) = {p}; factors of a meet is the union over its operands; an
    arrow prepends its source to every factor of its target.  Deduplicated as
    a set under syntactic equality.
    """
    if isinstance(e, Atom):
        return frozenset([Factor((), e.name)])
    if isinstance(e, Meet):
        return factors(e.left) | factors(e.right)
    src = e.source
    return frozenset(Factor((src,) + f.args, f.head) for f in factors(e.target))


def factor_to_expr(f: Factor) -> Expr:
    """Rebuild the right-nested arrow expression; factors of the result is {f}."""
    e: Expr = Atom(f.head)
    for arg in reversed(f.args):
        e = Arrow(arg, e)
    return e
