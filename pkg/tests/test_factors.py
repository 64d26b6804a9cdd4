import random

from hypothesis import given, settings

from bcd.factors import Factor, factor_to_expr, factors
from bcd.gen import random_strictly_positive_step
from bcd.rewrite import dist_normal_form, slat_canonical
from bcd.syntax import (
    ARROW_TARGET,
    Arrow,
    Atom,
    Meet,
    parse,
    strictly_positive_atom_positions,
    subexpressions,
)

from conftest import expr_strategy

A, B, C, P, Q = Atom("a"), Atom("b"), Atom("c"), Atom("p"), Atom("q")


class TestFactors:
    def test_atom(self):
        assert factors(P) == {Factor((), "p")}

    def test_arrow_distributes_over_meet(self):
        assert factors(parse("a -> (b & c)")) == {
            Factor((A,), "b"),
            Factor((A,), "c"),
        }

    def test_meet_unions(self):
        assert factors(parse("(a -> p) & q")) == {
            Factor((A,), "p"),
            Factor((), "q"),
        }

    def test_dedup(self):
        assert factors(parse("p & p")) == {Factor((), "p")}

    @given(expr_strategy())
    def test_args_are_subexpressions(self, e):
        subs = {sub for _, sub in subexpressions(e)}
        for f in factors(e):
            for arg in f.args:
                assert arg in subs

    @given(expr_strategy())
    def test_invariant_under_dist_normalization(self, e):
        # the factor skeleton survives dist normalization; arguments are
        # themselves dist-normalized because sources get rewritten too
        mapped = {
            Factor(tuple(dist_normal_form(a) for a in f.args), f.head)
            for f in factors(e)
        }
        assert factors(dist_normal_form(e)) == mapped

    @given(expr_strategy())
    def test_literal_invariance_when_sources_are_normal(self, e):
        nf = dist_normal_form(e)
        assert factors(dist_normal_form(nf)) == factors(nf)

    @given(expr_strategy())
    def test_matches_strictly_positive_atom_walk(self, e):
        # independent construction: every strictly positive atom occurrence
        # induces the factor collecting the arrow sources along its path
        built = set()
        for pos in strictly_positive_atom_positions(e):
            args = []
            cur = e
            for step in pos:
                if isinstance(cur, Arrow) and step == ARROW_TARGET:
                    args.append(cur.source)
                cur = (
                    cur.target
                    if isinstance(cur, Arrow)
                    else (cur.left if step == "left" else cur.right)
                )
            built.add(Factor(tuple(args), cur.name))
        assert built == factors(e)

    @given(expr_strategy())
    def test_one_one_correspondence_on_dist_normal_forms(self, e):
        nf = dist_normal_form(e)
        occurrence_factors = {}
        for pos in strictly_positive_atom_positions(nf):
            args = []
            cur = nf
            for step in pos:
                if isinstance(cur, Arrow):
                    args.append(cur.source)
                    cur = cur.target
                else:
                    cur = cur.left if step == "left" else cur.right
            occurrence_factors.setdefault(Factor(tuple(args), cur.name), []).append(pos)
        assert set(occurrence_factors) == factors(nf)


class TestFactorToExpr:
    def test_bare_atom(self):
        assert factor_to_expr(Factor((), "p")) == P

    def test_single_arg(self):
        assert factor_to_expr(Factor((A,), "p")) == parse("a -> p")

    def test_right_nesting(self):
        assert factor_to_expr(Factor((A, B), "p")) == parse("a -> (b -> p)")

    @given(expr_strategy(max_leaves=10))
    def test_round_trip(self, e):
        for f in factors(e):
            assert factors(factor_to_expr(f)) == {f}


class TestCompleteInvariants:
    @given(expr_strategy(max_leaves=10))
    @settings(max_examples=60)
    def test_strictly_positive_step_preserves_factors(self, e):
        rng = random.Random(17)
        rule, pos, after = random_strictly_positive_step(rng, e)
        assert factors(e) <= factors(after)
        # reverse direction: every factor of the result traces back to one of
        # the original, with arguments widened by at most a meet with a
        # subexpression of the result
        deltas = [sub for _, sub in subexpressions(after)]
        for f_new in factors(after):
            ok = False
            for f_old in factors(e):
                if f_old.head != f_new.head or f_old.arity != f_new.arity:
                    continue
                good = True
                for k in range(f_new.arity):
                    if slat_canonical(f_new.args[k]) == slat_canonical(f_old.args[k]):
                        continue
                    if any(
                        slat_canonical(f_new.args[k])
                        == slat_canonical(Meet(f_old.args[k], d))
                        for d in deltas
                    ):
                        continue
                    good = False
                    break
                if good:
                    ok = True
                    break
            assert ok
