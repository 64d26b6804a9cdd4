import json
import random
import threading

from hypothesis import given, settings

from bcd.decide import (
    DecisionCache,
    equiv,
    explain,
    numbered_factors,
    subseteq,
    subtype_matrix,
)
from bcd.gen import all_exprs, random_expr, witness_pool
from bcd.rewrite import (
    ASSO,
    ASSO_INV,
    COMM,
    DIST,
    IDEM,
    Verdict,
    absp,
    apply,
    convertible_bounded,
    redexes,
)
from bcd.model import satisfies_eq
from bcd.syntax import Arrow, Atom, Meet, arrow_depth, parse

from conftest import expr_strategy

A, B, C, P, Q = Atom("a"), Atom("b"), Atom("c"), Atom("p"), Atom("q")


class TestSubseteq:
    def test_meet_below_component(self):
        assert subseteq(parse("a & b"), A)

    def test_weak_distributivity(self):
        assert subseteq(parse("(c->a) & (c->b)"), parse("c -> (a & b)"))

    def test_absorption_direction(self):
        assert subseteq(parse("a -> b"), parse("(a & c) -> b"))

    def test_absorption_converse_fails(self):
        a, b = parse("(a & c) -> b"), parse("a -> b")
        assert not subseteq(a, b)
        # cross-checks: the search does not confirm, and a finite model separates
        assert convertible_bounded(a, b, budget=60) is Verdict.UNKNOWN
        assert not satisfies_eq(1, a, b) or not satisfies_eq(1, b, a)

    def test_distinct_atoms(self):
        assert not subseteq(P, Q)

    def test_arity_mismatch_never_matches(self):
        assert not subseteq(parse("a -> (a -> b)"), parse("a -> b"))
        assert not subseteq(parse("a -> b"), parse("a -> (a -> b)"))


class TestEquiv:
    def test_distributive_law(self):
        assert equiv(parse("c -> (a & b)"), parse("(c->a) & (c->b)"))

    def test_idempotence(self):
        assert equiv(A, parse("a & a"))

    def test_arrow_not_symmetric(self):
        assert not equiv(parse("a -> b"), parse("b -> a"))
        # countermodel at depth 1: the truncations are the originals
        assert not satisfies_eq(1, parse("a -> b"), parse("b -> a"))


class TestPreorderLaws:
    @given(expr_strategy())
    def test_reflexive(self, e):
        assert subseteq(e, e)

    @given(expr_strategy(max_leaves=8), expr_strategy(max_leaves=8), expr_strategy(max_leaves=8))
    @settings(max_examples=40)
    def test_transitive_on_constructed_chains(self, x, y, z):
        b = Meet(x, y)
        a = Meet(b, z)
        cache = DecisionCache()
        assert cache.subseteq(a, b) and cache.subseteq(b, x)
        assert cache.subseteq(a, x)

    @given(expr_strategy(max_leaves=8), expr_strategy(max_leaves=8))
    def test_meet_laws(self, a, b):
        cache = DecisionCache()
        m = Meet(a, b)
        assert cache.subseteq(m, a)
        assert cache.subseteq(m, b)

    @given(expr_strategy(max_leaves=6), expr_strategy(max_leaves=6), expr_strategy(max_leaves=6))
    @settings(max_examples=40)
    def test_meet_introduction(self, a, b, z):
        c = Meet(Meet(a, b), z)
        cache = DecisionCache()
        assert cache.subseteq(c, a) and cache.subseteq(c, b)
        assert cache.subseteq(c, Meet(a, b))

    @given(expr_strategy(max_leaves=6), expr_strategy(max_leaves=6), expr_strategy(max_leaves=6), expr_strategy(max_leaves=6))
    @settings(max_examples=40)
    def test_contravariance(self, a, u, d, v):
        c = Meet(a, u)
        b = Meet(d, v)
        cache = DecisionCache()
        assert cache.subseteq(c, a) and cache.subseteq(b, d)
        assert cache.subseteq(Arrow(a, b), Arrow(c, d))

    @given(expr_strategy(max_leaves=6), expr_strategy(max_leaves=6), expr_strategy(max_leaves=6))
    @settings(max_examples=40)
    def test_congruence(self, a, b, c):
        # equivalence is preserved by the connectives; use the distributive
        # law to manufacture an equivalent pair
        x = Arrow(c, Meet(a, b))
        y = Meet(Arrow(c, a), Arrow(c, b))
        cache = DecisionCache()
        assert cache.equiv(x, y)
        assert cache.equiv(Meet(x, c), Meet(y, c))
        assert cache.equiv(Arrow(c, x), Arrow(c, y))
        assert cache.equiv(Arrow(x, c), Arrow(y, c))

    @given(expr_strategy(max_leaves=8))
    @settings(max_examples=40)
    def test_rewriting_soundness(self, e):
        rng = random.Random(3)
        cache = DecisionCache()
        pool = witness_pool(e)
        for rule in (ASSO, ASSO_INV, COMM, IDEM, DIST, absp(rng.choice(pool))):
            positions = redexes(e, rule)
            if positions:
                pos = rng.choice(positions)
                assert cache.equiv(e, apply(e, rule, pos))


class TestOracleAndModelAgreement:
    def test_small_universe_against_search_and_model(self):
        universe = all_exprs(("@", "p"), 5)
        cache = DecisionCache()
        rng = random.Random(9)
        for _ in range(250):
            a, b = rng.choice(universe), rng.choice(universe)
            eq = cache.equiv(a, b)
            n = max(arrow_depth(a), arrow_depth(b))
            assert satisfies_eq(n, a, b) == eq
            if eq:
                assert convertible_bounded(a, b, budget=2000) is Verdict.CONFIRMED


class TestSubtypeMatrix:
    def test_single_atom(self):
        m = subtype_matrix(P)
        assert m.size == 1
        assert m.holds(0, 0)

    def test_meet_entries(self):
        m = subtype_matrix(parse("a & b"))
        # nodes: 0 = a & b, 1 = a, 2 = b
        assert m.holds(0, 1) and m.holds(0, 2)
        assert not m.holds(1, 0) and not m.holds(2, 0)
        assert not m.holds(1, 2)

    def test_reflexive_diagonal(self):
        m = subtype_matrix(parse("(a -> b) & (c -> (a & b))"))
        assert all(m.holds(i, i) for i in range(m.size))

    def test_transitive(self):
        rng = random.Random(31)
        for _ in range(10):
            m = subtype_matrix(random_expr(rng, 41))
            n = m.size
            for i in range(n):
                for j in range(n):
                    if not m.holds(i, j):
                        continue
                    for k in range(n):
                        if m.holds(j, k):
                            assert m.holds(i, k)

    def test_agrees_with_recursion(self):
        rng = random.Random(32)
        for _ in range(20):
            root = random_expr(rng, rng.randint(1, 49))
            m = subtype_matrix(root)
            cache = DecisionCache()
            for i in range(m.size):
                for j in range(m.size):
                    assert m.holds(i, j) == cache.subseteq(m.exprs[i], m.exprs[j])

    def test_numbered_factor_arguments_deeper(self):
        rng = random.Random(33)
        for _ in range(30):
            root = random_expr(rng, rng.randint(1, 61))
            exprs, facts = numbered_factors(root)
            for idx, fs in enumerate(facts):
                for _, args in fs:
                    assert all(k > idx for k in args)
                    assert idx + idx < min(
                        (k + kk for k in args for kk in args), default=10**9
                    )


class TestExplain:
    def test_positive_case(self):
        tree = explain(parse("a & b"), A)
        assert tree["holds"]
        assert json.dumps(tree)  # serializable

    def test_negative_case_marks_unmatched(self):
        tree = explain(P, Q)
        assert not tree["holds"]
        assert any(ob["matched"] is None for ob in tree["obligations"])

    def test_agrees_with_subseteq(self):
        rng = random.Random(41)
        for _ in range(50):
            a = random_expr(rng, rng.randint(1, 13))
            b = random_expr(rng, rng.randint(1, 13))
            assert explain(a, b)["holds"] == subseteq(a, b)


class TestConcurrency:
    def test_shared_cache_parallel_queries(self):
        rng = random.Random(55)
        pairs = [
            (random_expr(rng, rng.randint(1, 31)), random_expr(rng, rng.randint(1, 31)))
            for _ in range(200)
        ]
        expected = [subseteq(a, b) for a, b in pairs]
        cache = DecisionCache()
        results = [None] * len(pairs)

        def worker(start: int):
            for idx in range(start, len(pairs), 4):
                a, b = pairs[idx]
                results[idx] = cache.subseteq(a, b)

        threads = [threading.Thread(target=worker, args=(s,)) for s in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert results == expected
