import json

import pytest
from hypothesis import given

from bcd.syntax import (
    ARROW_SOURCE,
    ARROW_TARGET,
    MEET_LEFT,
    MEET_RIGHT,
    Arrow,
    Atom,
    InvalidPosition,
    Meet,
    ParseError,
    Polarity,
    arrow_depth,
    atoms_of,
    ebb,
    from_json_obj,
    node_at,
    node_count,
    parse,
    polarity,
    render,
    replace_at,
    strictly_positive_atom_positions,
    subexpressions,
)

from conftest import big_expr_strategy, expr_strategy

A, B, C = Atom("a"), Atom("b"), Atom("c")


class TestParse:
    def test_single_atom(self):
        assert parse("p") == Atom("p")

    def test_at_atom(self):
        assert parse("@") == Atom("@")

    def test_precedence_meet_tighter(self):
        assert parse("a -> b & c") == Arrow(A, Meet(B, C))

    def test_weak_distributive_left_side(self):
        assert parse("(c->a) & (c->b)") == Meet(Arrow(C, A), Arrow(C, B))

    def test_arrow_right_associative(self):
        assert parse("a -> b -> c") == Arrow(A, Arrow(B, C))

    def test_meet_left_associated(self):
        assert parse("a & b & c") == Meet(Meet(A, B), C)

    def test_meet_in_arrow_source(self):
        assert parse("a & b -> c") == Arrow(Meet(A, B), C)

    def test_whitespace_insignificant(self):
        assert parse(" a&b->c ") == parse("a & b -> c")

    def test_identifier_atoms(self):
        assert parse("foo_1 -> bar") == Arrow(Atom("foo_1"), Atom("bar"))

    @pytest.mark.parametrize(
        "text,offset",
        [
            ("", 0),
            ("a ->", 4),
            ("a -> ", 5),
            ("(a -> b", 7),
            ("a b", 2),
            ("a -> (b &)", 9),
            ("A", 0),
            ("a - b", 2),
        ],
    )
    def test_errors_carry_offsets(self, text, offset):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == offset
        assert info.value.expected

    def test_error_expected_set(self):
        with pytest.raises(ParseError) as info:
            parse("a &")
        assert "atom" in info.value.expected


class TestRender:
    def test_atom(self):
        assert render(Atom("@")) == "@"

    def test_arrow_over_meet(self):
        assert render(Arrow(A, Meet(B, C))) == "a -> b & c"

    def test_meet_of_arrows_parenthesized(self):
        assert render(Meet(Arrow(C, A), Arrow(C, B))) == "(c -> a) & (c -> b)"

    def test_right_meet_parenthesized(self):
        assert render(Meet(A, Meet(B, C))) == "a & (b & c)"
        assert render(Meet(Meet(A, B), C)) == "a & b & c"

    def test_nested_arrow_source(self):
        assert render(Arrow(Arrow(A, B), C)) == "(a -> b) -> c"
        assert render(Arrow(A, Arrow(B, C))) == "a -> b -> c"

    def test_json_format(self):
        obj = json.loads(render(Arrow(A, Meet(B, C)), "json"))
        assert obj == {"arrow": [{"atom": "a"}, {"meet": [{"atom": "b"}, {"atom": "c"}]}]}

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render(A, "xml")

    @given(big_expr_strategy())
    def test_round_trip(self, e):
        assert parse(render(e)) == e

    @given(expr_strategy())
    def test_json_round_trip(self, e):
        assert from_json_obj(json.loads(render(e, "json"))) == e


class TestSubexpressions:
    def test_atom(self):
        assert subexpressions(Atom("p")) == [((), Atom("p"))]

    def test_arrow_preorder(self):
        e = Arrow(A, B)
        assert subexpressions(e) == [
            ((), e),
            ((ARROW_SOURCE,), A),
            ((ARROW_TARGET,), B),
        ]

    def test_meet_first(self):
        e = Meet(A, B)
        seq = subexpressions(e)
        assert len(seq) == 3
        assert seq[0] == ((), e)

    @given(expr_strategy())
    def test_every_node_once_parents_earlier(self, e):
        seq = subexpressions(e)
        assert len(seq) == node_count(e)
        index = {pos: i for i, (pos, _) in enumerate(seq)}
        assert len(index) == len(seq)
        for pos, sub in seq:
            assert node_at(e, pos) == sub
            if pos:
                assert index[pos[:-1]] < index[pos]


class TestEbb:
    def test_root_arrow_counts_itself(self):
        assert ebb(parse("c -> d"), ()) == 1

    def test_atom_root(self):
        assert ebb(parse("p"), ()) == 0

    def test_nested_arrow(self):
        e = parse("a -> (b & (c -> d))")
        assert ebb(e, (ARROW_TARGET, MEET_RIGHT)) == 2

    def test_invalid_position(self):
        with pytest.raises(InvalidPosition):
            ebb(parse("p"), (MEET_LEFT,))

    @given(expr_strategy())
    def test_monotone_along_paths(self, e):
        for pos, _ in subexpressions(e):
            if pos:
                assert ebb(e, pos) >= ebb(e, pos[:-1])


class TestArrowDepth:
    def test_no_arrows(self):
        assert arrow_depth(parse("p & q")) == 0

    def test_single_arrow(self):
        assert arrow_depth(parse("c -> d")) == 1

    def test_nested_source(self):
        assert arrow_depth(parse("(a -> b) -> c")) == 2

    @given(expr_strategy())
    def test_equals_max_ebb(self, e):
        assert arrow_depth(e) == max(ebb(e, pos) for pos, _ in subexpressions(e))

    @given(expr_strategy(), expr_strategy())
    def test_structural_identities(self, x, y):
        assert arrow_depth(Meet(x, y)) == max(arrow_depth(x), arrow_depth(y))
        assert arrow_depth(Arrow(x, y)) == 1 + max(arrow_depth(x), arrow_depth(y))


class TestPolarity:
    def test_root_strictly_positive(self):
        assert polarity(parse("a -> b"), ()) is Polarity.STRICTLY_POSITIVE

    def test_arrow_source_negative(self):
        assert polarity(parse("a -> b"), (ARROW_SOURCE,)) is Polarity.NEGATIVE

    def test_double_flip_positive_not_strict(self):
        e = parse("(a -> b) -> c")
        assert polarity(e, (ARROW_SOURCE, ARROW_SOURCE)) is Polarity.POSITIVE

    def test_invalid_position(self):
        with pytest.raises(InvalidPosition):
            polarity(parse("a -> b"), (MEET_LEFT,))

    @given(expr_strategy())
    def test_strict_iff_no_source_steps(self, e):
        for pos, _ in subexpressions(e):
            pol = polarity(e, pos)
            assert pol in (
                Polarity.NEGATIVE,
                Polarity.POSITIVE,
                Polarity.STRICTLY_POSITIVE,
            )
            if pol is Polarity.STRICTLY_POSITIVE:
                assert all(s != ARROW_SOURCE for s in pos)
            else:
                assert any(s == ARROW_SOURCE for s in pos)

    @given(expr_strategy())
    def test_strictly_positive_atoms_helper(self, e):
        expected = {
            pos
            for pos, sub in subexpressions(e)
            if isinstance(sub, Atom)
            and polarity(e, pos) is Polarity.STRICTLY_POSITIVE
        }
        assert set(strictly_positive_atom_positions(e)) == expected


class TestStructure:
    def test_atom_name_nonempty(self):
        with pytest.raises(ValueError):
            Atom("")

    def test_structural_equality_not_modulo_theory(self):
        assert Meet(A, B) != Meet(B, A)
        assert Meet(Meet(A, B), C) != Meet(A, Meet(B, C))

    def test_replace_at(self):
        e = parse("a -> b & c")
        assert replace_at(e, (ARROW_TARGET, MEET_LEFT), C) == parse("a -> c & c")
        with pytest.raises(InvalidPosition):
            replace_at(e, (MEET_LEFT,), C)

    def test_atoms_of(self):
        assert atoms_of(parse("a -> (b & a) -> @")) == frozenset({"a", "b", "@"})
