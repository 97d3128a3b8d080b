import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import gen_ast, make_vocab
from sdgclassify.query_lang import (
    And,
    Not,
    Or,
    ParseError,
    Phrase,
    PhraseWord,
    Prefix,
    Term,
    ast_terms,
    format_query,
    parse_query,
    tokenize_query,
)


class TestTokenize:
    def test_words_and_operator(self):
        lexemes = tokenize_query("poverty AND slum*")
        assert [(l.kind, l.text) for l in lexemes] == [
            ("WORD", "poverty"),
            ("AND", "AND"),
            ("WORD", "slum*"),
        ]

    def test_quoted(self):
        (lex,) = tokenize_query('"social protection"')
        assert lex.kind == "QUOTED"
        assert lex.text == "social protection"

    def test_unbalanced_quote_reports_opening_offset(self):
        raw = 'poverty AND "unterminated'
        with pytest.raises(ParseError) as err:
            tokenize_query(raw)
        assert err.value.offset == raw.index('"')

    def test_keywords_case_insensitive(self):
        kinds = [l.kind for l in tokenize_query("a and b OR c nOt d")]
        assert kinds == ["WORD", "AND", "WORD", "OR", "WORD", "NOT", "WORD"]

    def test_parens_split_words(self):
        kinds = [l.kind for l in tokenize_query("(alleviat* OR eradicat*)")]
        assert kinds == ["LPAREN", "WORD", "OR", "WORD", "RPAREN"]

    def test_offsets_within_input(self):
        raw = '  poverty  ("a b"  OR x)'
        for lex in tokenize_query(raw):
            assert 0 <= lex.offset < len(raw)


class TestParse:
    def test_nested_query(self):
        ast = parse_query('poverty AND ("social protection" OR inequalit*)')
        assert ast == And(
            (
                Term("poverty"),
                Or((Phrase((PhraseWord("social"), PhraseWord("protection"))), Prefix("inequalit"))),
            )
        )

    def test_trailing_wildcard(self):
        assert parse_query("sustainab*") == Prefix("sustainab")

    def test_precedence_and_binds_tighter(self):
        assert parse_query("a OR b AND c") == Or((Term("a"), And((Term("b"), Term("c")))))
        assert parse_query("a OR b AND c") == parse_query("a OR (b AND c)")

    def test_internal_wildcard_rejected(self):
        with pytest.raises(ParseError):
            parse_query("pover*ty")

    def test_lowercased_at_parse_time(self):
        assert parse_query("Poverty AND X") == parse_query("poverty and x")

    def test_not_parsing(self):
        assert parse_query("a AND NOT b") == And((Term("a"), Not(Term("b"))))
        assert parse_query("NOT NOT a") == Not(Not(Term("a")))

    def test_single_quoted_word_is_term(self):
        assert parse_query('"poverty"') == Term("poverty")
        assert parse_query('"sustainab*"') == Prefix("sustainab")

    def test_phrase_with_wildcard_word(self):
        assert parse_query('"social safety net*"') == Phrase(
            (PhraseWord("social"), PhraseWord("safety"), PhraseWord("net", prefix=True))
        )

    def test_hyphenated_word_becomes_phrase(self):
        assert parse_query("covid-19") == Phrase((PhraseWord("covid"), PhraseWord("19")))

    @pytest.mark.parametrize(
        "raw",
        [
            "",
            "   ",
            "a AND",
            "OR a",
            "(a OR b",
            "a)",
            "a AND ()",
            '""',
            "*",
            "a ** b",
            "AND",
            "a AND and",
        ],
    )
    def test_malformed_inputs_raise_parse_error(self, raw):
        with pytest.raises(ParseError):
            parse_query(raw)

    def test_quoted_operator_word_is_a_term(self):
        assert parse_query('"and"') == Term("and")

    def test_error_offsets_lie_within_input(self):
        for raw in ["a AND", "(a OR b", "pover*ty", "a)"]:
            with pytest.raises(ParseError) as err:
                parse_query(raw)
            assert 0 <= err.value.offset <= len(raw)

    def test_deep_nesting_fails_cleanly(self):
        raw = "(" * 5000 + "a" + ")" * 5000
        with pytest.raises(ParseError):
            parse_query(raw)


class TestAstTerms:
    def test_duplicate_terms_share_one_id(self):
        ast = And((Term("poverty"), Term("poverty")))
        assert ast_terms(ast) == [(0, Term("poverty"))]

    def test_phrase_is_one_atom(self):
        phrase = Phrase((PhraseWord("social"), PhraseWord("protection")))
        assert ast_terms(phrase) == [(0, phrase)]

    def test_distinct_atoms_get_distinct_ids(self):
        ast = Or((Term("a"), Prefix("b")))
        assert ast_terms(ast) == [(0, Term("a")), (1, Prefix("b"))]

    def test_term_and_prefix_of_same_text_are_distinct(self):
        ast = Or((Term("a"), Prefix("a")))
        assert len(ast_terms(ast)) == 2


class TestProperties:
    def test_round_trip_generated_asts(self):
        rng = random.Random(20260811)
        vocab = make_vocab(rng, 30)
        for _ in range(500):
            ast = gen_ast(rng, vocab, depth=4)
            assert parse_query(format_query(ast)) == ast

    @given(st.text(max_size=80))
    @settings(max_examples=300)
    def test_parser_totality(self, raw):
        try:
            parse_query(raw)
        except ParseError:
            pass  # the only acceptable failure mode

    @given(
        st.sampled_from(["alpha", "beta", "gamma"]),
        st.sampled_from(["delta", "eps"]),
        st.sampled_from(["zeta", "eta"]),
    )
    def test_precedence_property(self, a, b, c):
        assert parse_query(f"{a} OR {b} AND {c}") == parse_query(f"{a} OR ({b} AND {c})")
