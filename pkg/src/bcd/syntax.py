"""Intersection type expressions: finite binary trees of atoms, arrows, and meets.

Concrete syntax (ascii)::

    expr  := arrow
    arrow := meet ("->" arrow)?          # right associative
    meet  := prim ("&" prim)*            # left associated, binds tighter than ->
    prim  := ATOM | "(" expr ")"
    ATOM  := "@" | [a-z][a-zA-Z0-9_]*

Whitespace is insignificant.  "@" is an ordinary atom everywhere except the
depth-truncation rule and model construction, which use it as the placeholder
for discarded subexpressions.

All values are immutable after construction and every operation here is pure,
so the module is safe for unsynchronized concurrent use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Union

TRUNCATION_ATOM = "@"

# Position steps
ARROW_SOURCE = "source"
ARROW_TARGET = "target"
MEET_LEFT = "left"
MEET_RIGHT = "right"

Position = tuple  # tuple of step strings; () is the root


class ParseError(ValueError):
    """Malformed expression text; carries the byte offset and expected tokens."""

    def __init__(self, message: str, offset: int, expected: tuple = ()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(detail)


class InvalidPosition(ValueError):
    """A position whose steps do not reach a node of the expression."""


@dataclass(frozen=True, eq=False, repr=False)
class Atom:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom name must be nonempty")
        object.__setattr__(self, "_hash", hash(("atom", self.name)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (type(other) is Atom and other.name == self.name)

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Arrow:
    source: "Expr"
    target: "Expr"

    def __post_init__(self):
        object.__setattr__(
            self, "_hash", hash(("arrow", hash(self.source), hash(self.target)))
        )

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Arrow
            and other._hash == self._hash
            and other.source == self.source
            and other.target == self.target
        )

    def __repr__(self):
        return f"Arrow({self.source!r}, {self.target!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Meet:
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        object.__setattr__(
            self, "_hash", hash(("meet", hash(self.left), hash(self.right)))
        )

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Meet
            and other._hash == self._hash
            and other.left == self.left
            and other.right == self.right
        )

    def __repr__(self):
        return f"Meet({self.left!r}, {self.right!r})"


Expr = Union[Atom, Arrow, Meet]


class Polarity(Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    STRICTLY_POSITIVE = "strictly_positive"


# ---------------------------------------------------------------------------
# Parsing

_ATOM_HEAD = set("abcdefghijklmnopqrstuvwxyz")
_ATOM_TAIL = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


def _tokenize(text: str) -> list:
    """Return (kind, value, offset) triples; kinds: atom, arrow, meet, lparen, rparen, end."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
        elif c == "@":
            toks.append(("atom", "@", i))
            i += 1
        elif c in _ATOM_HEAD:
            j = i + 1
            while j < n and text[j] in _ATOM_TAIL:
                j += 1
            toks.append(("atom", text[i:j], i))
            i = j
        elif c == "-":
            if i + 1 < n and text[i + 1] == ">":
                toks.append(("arrow", "->", i))
                i += 2
            else:
                raise ParseError("stray '-'", i, ("'->'",))
        elif c == "&":
            toks.append(("meet", "&", i))
            i += 1
        elif c == "(":
            toks.append(("lparen", "(", i))
            i += 1
        elif c == ")":
            toks.append(("rparen", ")", i))
            i += 1
        else:
            raise ParseError(
                f"unexpected character {c!r}", i, ("atom", "'('", "'->'", "'&'")
            )
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, toks: list):
        self.toks = toks
        self.i = 0

    def peek(self) -> tuple:
        return self.toks[self.i]

    def advance(self) -> tuple:
        t = self.toks[self.i]
        self.i += 1
        return t

    def arrow(self) -> Expr:
        left = self.meet()
        if self.peek()[0] == "arrow":
            self.advance()
            return Arrow(left, self.arrow())
        return left

    def meet(self) -> Expr:
        e = self.prim()
        while self.peek()[0] == "meet":
            self.advance()
            e = Meet(e, self.prim())
        return e

    def prim(self) -> Expr:
        kind, value, offset = self.peek()
        if kind == "atom":
            self.advance()
            return Atom(value)
        if kind == "lparen":
            self.advance()
            e = self.arrow()
            kind2, _, offset2 = self.peek()
            if kind2 != "rparen":
                raise ParseError("unclosed parenthesis", offset2, ("')'",))
            self.advance()
            return e
        raise ParseError("expected an expression", offset, ("atom", "'('"))


def parse(text: str) -> Expr:
    """Parse the ascii grammar; raises ParseError with offset and expected set."""
    p = _Parser(_tokenize(text))
    e = p.arrow()
    kind, _, offset = p.peek()
    if kind != "end":
        raise ParseError("trailing input", offset, ("end of input",))
    return e


# ---------------------------------------------------------------------------
# Rendering

def _body(e: Expr) -> str:
    # Un-parenthesized rendering, cached on the node; parenthesization is a
    # purely local decision made by _wrap.
    b = e.__dict__.get("_body")
    if b is None:
        if isinstance(e, Atom):
            b = e.name
        elif isinstance(e, Arrow):
            b = _wrap(e.source, "arrow_source") + " -> " + _wrap(e.target, "top")
        else:
            b = _wrap(e.left, "meet_left") + " & " + _wrap(e.right, "meet_right")
        object.__setattr__(e, "_body", b)
    return b


def _wrap(e: Expr, ctx: str) -> str:
    # ctx is one of "top", "arrow_source", "meet_left", "meet_right"; arrow
    # targets behave like "top" because -> is right associative.
    b = _body(e)
    if isinstance(e, Arrow) and ctx != "top":
        return "(" + b + ")"
    if isinstance(e, Meet) and ctx == "meet_right":
        return "(" + b + ")"
    return b


def to_json_obj(e: Expr) -> dict:
    if isinstance(e, Atom):
        return {"atom": e.name}
    if isinstance(e, Arrow):
        return {"arrow": [to_json_obj(e.source), to_json_obj(e.target)]}
    return {"meet": [to_json_obj(e.left), to_json_obj(e.right)]}


def from_json_obj(obj) -> Expr:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"not an expression object: {obj!r}")
    if "atom" in obj:
        name = obj["atom"]
        if not isinstance(name, str) or not name:
            raise ValueError(f"bad atom name: {name!r}")
        return Atom(name)
    if "arrow" in obj:
        pair = obj["arrow"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValueError("arrow takes exactly two children")
        return Arrow(from_json_obj(pair[0]), from_json_obj(pair[1]))
    if "meet" in obj:
        pair = obj["meet"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValueError("meet takes exactly two children")
        return Meet(from_json_obj(pair[0]), from_json_obj(pair[1]))
    raise ValueError(f"unknown expression node: {obj!r}")


def render(e: Expr, format: str = "ascii") -> str:
    """Render with minimal parenthesization ("ascii") or as a JSON AST ("json").

    parse(render(e)) == e for every expression.
    """
    if format == "ascii":
        return _body(e)
    if format == "json":
        return json.dumps(to_json_obj(e))
    raise ValueError(f"unknown format {format!r}")


# ---------------------------------------------------------------------------
# Positions and structural queries

def node_at(e: Expr, pos: Position) -> Expr:
    cur = e
    for step in pos:
        if isinstance(cur, Arrow) and step == ARROW_SOURCE:
            cur = cur.source
        elif isinstance(cur, Arrow) and step == ARROW_TARGET:
            cur = cur.target
        elif isinstance(cur, Meet) and step == MEET_LEFT:
            cur = cur.left
        elif isinstance(cur, Meet) and step == MEET_RIGHT:
            cur = cur.right
        else:
            raise InvalidPosition(f"step {step!r} does not apply at {cur!r}")
    return cur


def replace_at(e: Expr, pos: Position, replacement: Expr) -> Expr:
    if not pos:
        return replacement
    step, rest = pos[0], pos[1:]
    if isinstance(e, Arrow) and step == ARROW_SOURCE:
        return Arrow(replace_at(e.source, rest, replacement), e.target)
    if isinstance(e, Arrow) and step == ARROW_TARGET:
        return Arrow(e.source, replace_at(e.target, rest, replacement))
    if isinstance(e, Meet) and step == MEET_LEFT:
        return Meet(replace_at(e.left, rest, replacement), e.right)
    if isinstance(e, Meet) and step == MEET_RIGHT:
        return Meet(e.left, replace_at(e.right, rest, replacement))
    raise InvalidPosition(f"step {step!r} does not apply at {e!r}")


def subexpressions(e: Expr) -> list:
    """Depth-first preorder list of (position, subexpression) pairs.

    The whole expression is item 0 and every enclosing expression receives a
    lower index than its subexpressions.
    """
    out = []
    stack = [((), e)]
    while stack:
        pos, x = stack.pop()
        out.append((pos, x))
        if isinstance(x, Arrow):
            stack.append((pos + (ARROW_TARGET,), x.target))
            stack.append((pos + (ARROW_SOURCE,), x.source))
        elif isinstance(x, Meet):
            stack.append((pos + (MEET_RIGHT,), x.right))
            stack.append((pos + (MEET_LEFT,), x.left))
    return out


def node_count(e: Expr) -> int:
    total = 0
    stack = [e]
    while stack:
        x = stack.pop()
        total += 1
        if isinstance(x, Arrow):
            stack.append(x.source)
            stack.append(x.target)
        elif isinstance(x, Meet):
            stack.append(x.left)
            stack.append(x.right)
    return total


def atoms_of(e: Expr) -> frozenset:
    names = set()
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Atom):
            names.add(x.name)
        elif isinstance(x, Arrow):
            stack.append(x.source)
            stack.append(x.target)
        else:
            stack.append(x.left)
            stack.append(x.right)
    return frozenset(names)


def ebb(e: Expr, pos: Position = ()) -> int:
    """Count of arrow nodes on the root-to-pos path, including the node at pos
    itself when that node is an arrow.

    Consequently ebb(c -> d, ()) == 1 and the ebb of an atom at the root is 0.
    Extending a position never decreases ebb.
    """
    cur = e
    count = 0
    for step in pos:
        if isinstance(cur, Arrow):
            count += 1
            if step == ARROW_SOURCE:
                cur = cur.source
            elif step == ARROW_TARGET:
                cur = cur.target
            else:
                raise InvalidPosition(f"step {step!r} does not apply at {cur!r}")
        elif isinstance(cur, Meet):
            if step == MEET_LEFT:
                cur = cur.left
            elif step == MEET_RIGHT:
                cur = cur.right
            else:
                raise InvalidPosition(f"step {step!r} does not apply at {cur!r}")
        else:
            raise InvalidPosition(f"step {step!r} does not apply at {cur!r}")
    if isinstance(cur, Arrow):
        count += 1
    return count


def arrow_depth(e: Expr) -> int:
    """Maximum ebb over all positions; 0 iff the expression has no arrow."""
    if isinstance(e, Atom):
        return 0
    if isinstance(e, Arrow):
        return 1 + max(arrow_depth(e.source), arrow_depth(e.target))
    return max(arrow_depth(e.left), arrow_depth(e.right))


def polarity(e: Expr, pos: Position) -> Polarity:
    """Polarity of the occurrence at pos.

    The root is strictly positive; descending into an arrow source flips
    positive/negative and destroys strictness; arrow targets and meet operands
    preserve everything.  Strict positivity refines positivity, so positions
    with no arrow-source step report STRICTLY_POSITIVE rather than POSITIVE.
    """
    node_at(e, pos)  # validates, raises InvalidPosition
    flips = sum(1 for step in pos if step == ARROW_SOURCE)
    if flips == 0:
        return Polarity.STRICTLY_POSITIVE
    return Polarity.NEGATIVE if flips % 2 else Polarity.POSITIVE


def strictly_positive_atom_positions(e: Expr) -> list:
    """Positions of atom occurrences reachable without entering an arrow source."""
    out = []
    stack = [((), e)]
    while stack:
        pos, x = stack.pop()
        if isinstance(x, Atom):
            out.append(pos)
        elif isinstance(x, Arrow):
            stack.append((pos + (ARROW_TARGET,), x.target))
        else:
            stack.append((pos + (MEET_RIGHT,), x.right))
            stack.append((pos + (MEET_LEFT,), x.left))
    return out
