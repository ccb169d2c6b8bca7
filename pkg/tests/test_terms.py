import itertools

import pytest
from hypothesis import given, strategies as st

from ko7.terms import (
    ArityError,
    InvalidPositionError,
    ParseError,
    Term,
    VOID,
    app,
    delta,
    enumerate_terms,
    eqw,
    integrate,
    merge,
    parse,
    positions,
    rec,
    render,
    replace_at,
    size,
    subterm_at,
    term_from_json,
    term_to_json,
    terms_of_size,
)

random_terms = st.recursive(
    st.just(VOID),
    lambda child: st.one_of(
        st.builds(delta, child),
        st.builds(integrate, child),
        st.builds(merge, child, child),
        st.builds(app, child, child),
        st.builds(rec, child, child, child),
        st.builds(eqw, child, child),
    ),
    max_leaves=15,
)


def count_by_recurrence(n: int) -> int:
    """Independent oracle: arity recurrence over the signature
    (two unary, three binary, one ternary constructor plus the atom)."""
    counts = {1: 1}
    for m in range(2, n + 1):
        unary = 2 * counts.get(m - 1, 0)
        binary = 3 * sum(
            counts.get(i, 0) * counts.get(m - 1 - i, 0) for i in range(1, m - 1)
        )
        ternary = sum(
            counts.get(i, 0) * counts.get(j, 0) * counts.get(m - 1 - i - j, 0)
            for i in range(1, m - 1)
            for j in range(1, m - 1 - i)
        )
        counts[m] = unary + binary + ternary
    return counts.get(n, 0)


class TestParseRender:
    def test_atomic(self):
        assert parse("void") == VOID
        assert render(VOID) == "void"

    def test_nested(self):
        assert parse("(integrate (delta void))") == integrate(delta(VOID))
        assert parse("(rec void void (delta void))") == rec(VOID, VOID, delta(VOID))

    def test_render_examples(self):
        assert render(merge(VOID, VOID)) == "(merge void void)"
        assert render(eqw(VOID, VOID)) == "(eqw void void)"

    def test_whitespace_tolerant(self):
        assert parse("  ( merge   void\n void )  ") == merge(VOID, VOID)

    def test_syntax_error_offset(self):
        with pytest.raises(ParseError) as err:
            parse("(merge void")
        assert err.value.offset == 7
        with pytest.raises(ParseError) as err:
            parse(")")
        assert err.value.offset == 0
        with pytest.raises(ParseError) as err:
            parse("(bogus void)")
        assert err.value.offset == 1

    def test_bare_constructor_rejected(self):
        with pytest.raises(ParseError):
            parse("delta")

    def test_grammar_exact_on_atom(self):
        # the atom is written bare; parenthesized forms are not in the grammar
        with pytest.raises(ParseError):
            parse("(void)")
        with pytest.raises(ParseError):
            parse("()")

    def test_trailing_input_rejected(self):
        with pytest.raises(ParseError):
            parse("void void")

    def test_arity_error_names_constructor(self):
        with pytest.raises(ArityError) as err:
            parse("(delta void void)")
        assert err.value.constructor == "delta"
        with pytest.raises(ArityError) as err:
            parse("(rec void void)")
        assert err.value.constructor == "rec"

    def test_roundtrip_enumerated(self):
        for t in enumerate_terms(6):
            assert parse(render(t)) == t

    @given(random_terms)
    def test_roundtrip_random(self, t):
        assert parse(render(t)) == t


class TestSize:
    def test_examples(self):
        assert size(VOID) == 1
        assert size(delta(VOID)) == 2
        # rec node + two voids + delta chain of two nodes
        assert size(rec(VOID, VOID, delta(VOID))) == 5

    @given(random_terms)
    def test_size_counts_positions(self, t):
        assert size(t) == sum(1 for _ in positions(t))


class TestEnumerate:
    def test_smallest_sizes(self):
        assert enumerate_terms(1) == [VOID]
        assert enumerate_terms(2) == [VOID, delta(VOID), integrate(VOID)]

    def test_count_matches_recurrence(self):
        for n in range(1, 8):
            assert len(terms_of_size(n)) == count_by_recurrence(n)
        assert len(enumerate_terms(4)) == 1 + 2 + 7 + 27

    def test_duplicate_free(self):
        pool = enumerate_terms(6)
        assert len(pool) == len(set(pool))

    def test_sizes_respected_and_ordered(self):
        pool = enumerate_terms(6)
        sizes = [size(t) for t in pool]
        assert sizes == sorted(sizes)
        assert all(s <= 6 for s in sizes)

    @given(random_terms)
    def test_membership_agrees_with_size(self, t):
        pool = set(enumerate_terms(5))
        assert (t in pool) == (size(t) <= 5)

    def test_invalid_bound(self):
        with pytest.raises(Exception):
            enumerate_terms(0)


class TestPositions:
    def test_subterm_at(self):
        t = merge(VOID, delta(VOID))
        assert subterm_at(t, (1,)) == delta(VOID)
        assert subterm_at(t, ()) == t

    def test_replace_at(self):
        assert replace_at(integrate(VOID), (0,), delta(VOID)) == integrate(delta(VOID))
        assert replace_at(VOID, (), merge(VOID, VOID)) == merge(VOID, VOID)

    def test_invalid_position(self):
        with pytest.raises(InvalidPositionError) as err:
            subterm_at(VOID, (0,))
        assert err.value.index == 0
        with pytest.raises(InvalidPositionError):
            replace_at(delta(VOID), (1,), VOID)

    @given(random_terms)
    def test_replace_with_own_subterm_is_identity(self, t):
        for p in positions(t):
            assert replace_at(t, p, subterm_at(t, p)) == t


class TestJson:
    def test_shape(self):
        assert term_to_json(merge(VOID, VOID)) == {
            "k": "merge",
            "c": [{"k": "void", "c": []}, {"k": "void", "c": []}],
        }

    @given(random_terms)
    def test_roundtrip(self, t):
        assert term_from_json(term_to_json(t)) == t


def test_term_arity_validated():
    with pytest.raises(Exception):
        Term("delta", ())
    with pytest.raises(Exception):
        Term("nonsense", ())
