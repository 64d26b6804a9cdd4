"""Finite models of the theory extended with depth-n truncation.

The carrier of the depth-n model over a given atom set is enumerated level by
level: level-0 primes are the atoms; level-k primes are the atoms plus all
arrows between level-(k-1) carrier members; candidates are the canonical
meets of nonempty prime subsets, deduplicated up to mutual subtyping.  Within
the candidate pool two meets are congruent exactly when they lie below the
same primes, so deduplication keys on that prime fingerprint (the tests also
cross-check this against naive pairwise comparison).

Equality in the depth-n model can be decided without the carrier: truncating
at depth n is a sound model-preserving reduction, and truncated expressions
have arrow depth at most n, where model equality and congruence coincide.
That second path is satisfies_eq; the table-driven path is Model.eval.

A built Model is immutable and safe to share and query concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .decide import DecisionCache, equiv
from .rewrite import INFINITE_DEPTH, dept_normal_form, meet_of, slat_canonical
from .syntax import TRUNCATION_ATOM, Arrow, Atom, Expr, Meet, atoms_of

_OVERFLOW_CAP = 1_000_000


class UnknownAtom(ValueError):
    """An expression uses an atom the model does not carry."""


class LimitExceeded(RuntimeError):
    """Enumeration would exceed the configured desk-scale caps."""


def stack_of_twos(n: int, m: int) -> int:
    """Iterated exponential: n=0 gives m, each further level is 2**previous.

    Raises OverflowError once the tower would leave a sane machine range;
    bound checks only ever need small instances.
    """
    if n < 0 or m < 0:
        raise ValueError("stack_of_twos takes natural numbers")
    v = m
    for _ in range(n):
        if v > _OVERFLOW_CAP:
            raise OverflowError(
                f"tower value of {v.bit_length()} bits exceeds the supported range"
            )
        v = 2**v
    return v


@dataclass(frozen=True)
class StackOfTwos:
    n: int
    m: int
    value: int

    @classmethod
    def compute(cls, n: int, m: int) -> "StackOfTwos":
        return cls(n, m, stack_of_twos(n, m))


@dataclass
class Model:
    """Carrier of canonical representatives with meet and arrow tables."""

    atoms: tuple
    depth: int
    carrier: tuple
    meet_table: tuple
    arrow_table: tuple
    _primes: tuple = field(repr=False, compare=False, default=())
    _fp_index: dict = field(repr=False, compare=False, default_factory=dict)
    _atom_index: dict = field(repr=False, compare=False, default_factory=dict)
    _cache: DecisionCache = field(repr=False, compare=False, default_factory=DecisionCache)

    @property
    def size(self) -> int:
        return len(self.carrier)

    def _check_atoms(self, e: Expr) -> None:
        unknown = atoms_of(e) - set(self.atoms)
        if unknown:
            raise UnknownAtom(f"atoms {sorted(unknown)} not carried by this model")

    def eval(self, e: Expr) -> int:
        """Carrier index of e by structural fold through the tables."""
        if isinstance(e, Atom):
            idx = self._atom_index.get(e.name)
            if idx is None:
                raise UnknownAtom(f"atom {e.name!r} not carried by this model")
            return idx
        if isinstance(e, Meet):
            return self.meet_table[self.eval(e.left)][self.eval(e.right)]
        return self.arrow_table[self.eval(e.source)][self.eval(e.target)]

    def class_index(self, e: Expr) -> int:
        """Carrier index of e's congruence class, via truncation and the
        prime fingerprint; independent of the tables."""
        self._check_atoms(e)
        t = dept_normal_form(e, self.depth)
        fp = tuple(self._cache.subseteq(t, q) for q in self._primes)
        return self._fp_index[fp]


def build_model(
    atoms,
    depth: int,
    *,
    max_atoms: int = 2,
    max_depth: int = 1,
    max_candidates: int = 4096,
) -> Model:
    """Enumerate the depth-n carrier over the given atoms and fill the tables.

    Default caps keep the enumeration at desk scale (two atoms, depth one,
    at most 4096 candidate meets); pass larger caps explicitly to override.
    """
    names = tuple(sorted(set(atoms)))
    if TRUNCATION_ATOM not in names:
        raise ValueError(f"model atoms must include {TRUNCATION_ATOM!r}")
    if depth == INFINITE_DEPTH or depth < 0:
        raise ValueError("model depth must be a finite natural number")
    if len(names) > max_atoms:
        raise LimitExceeded(
            f"{len(names)} atoms exceeds the cap of {max_atoms}; override with max_atoms"
        )
    if depth > max_depth:
        raise LimitExceeded(
            f"depth {depth} exceeds the cap of {max_depth}; override with max_depth"
        )

    cache = DecisionCache()
    atom_exprs = [Atom(a) for a in names]
    carrier: list = []
    primes: list = []
    fp_index: dict = {}

    for level in range(depth + 1):
        if level == 0:
            primes = list(atom_exprs)
        else:
            primes = list(atom_exprs) + [
                Arrow(x, y) for x in carrier for y in carrier
            ]
        count = (1 << len(primes)) - 1
        if count > max_candidates:
            raise LimitExceeded(
                f"{count} candidate meets exceeds the cap of {max_candidates};"
                " override with max_candidates"
            )
        carrier = []
        fp_index = {}
        for mask in range(1, (1 << len(primes))):
            members = [primes[k] for k in range(len(primes)) if mask >> k & 1]
            cand = slat_canonical(meet_of(members))
            fp = tuple(cache.subseteq(cand, q) for q in primes)
            if fp not in fp_index:
                fp_index[fp] = len(carrier)
                carrier.append(cand)

    def class_of(e: Expr) -> int:
        fp = tuple(cache.subseteq(e, q) for q in primes)
        idx = fp_index.get(fp)
        if idx is None:
            raise RuntimeError(f"no carrier class for {e!r}; enumeration incomplete")
        return idx

    size = len(carrier)
    meet_table = tuple(
        tuple(class_of(Meet(carrier[i], carrier[j])) for j in range(size))
        for i in range(size)
    )
    arrow_table = tuple(
        tuple(
            class_of(dept_normal_form(Arrow(carrier[i], carrier[j]), depth))
            for j in range(size)
        )
        for i in range(size)
    )
    atom_index = {a: class_of(Atom(a)) for a in names}

    return Model(
        names,
        depth,
        tuple(carrier),
        meet_table,
        arrow_table,
        tuple(primes),
        fp_index,
        atom_index,
        cache,
    )


def satisfies_eq(n: int, a: Expr, b: Expr) -> bool:
    """Depth-n model equality, decided without a carrier.

    Truncation at depth n stays inside the model's congruence class, and
    truncated expressions are shallow enough that model equality collapses
    to plain congruence, so this is equiv over the truncations.
    """
    if n == INFINITE_DEPTH or n < 0:
        raise ValueError("depth must be a finite natural number")
    return equiv(dept_normal_form(a, n), dept_normal_form(b, n))
