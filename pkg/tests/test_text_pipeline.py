from hypothesis import given, settings
from hypothesis import strategies as st

from sdgclassify.query_lang import Phrase, PhraseWord, Prefix, Term
from sdgclassify.text_pipeline import match_atom, normalize


class TestNormalize:
    def test_punctuation_and_hyphens_become_separators(self):
        doc = normalize("Poverty-Alleviation in Sub-Saharan Africa!")
        assert doc.tokens == ["poverty", "alleviation", "in", "sub", "saharan", "africa"]

    def test_empty_input(self):
        doc = normalize("")
        assert doc.tokens == []
        assert doc.positions == {}

    def test_symbols_and_digits(self):
        doc = normalize("Sustainability & SDGs (2023)")
        assert doc.tokens == ["sustainability", "sdgs", "2023"]

    def test_diacritics_folded(self):
        assert normalize("Café résumé São Paulo").tokens == ["cafe", "resume", "sao", "paulo"]

    def test_positions_match_token_list(self):
        doc = normalize("a b a c a")
        assert doc.positions == {"a": [0, 2, 4], "b": [1], "c": [3]}

    def test_char_length_recorded(self):
        assert normalize("ab cd").char_length == 5

    @given(st.text(max_size=120))
    @settings(max_examples=300)
    def test_tokens_are_lowercase_alphanumeric(self, text):
        doc = normalize(text)
        for tok in doc.tokens:
            assert tok
            assert all(ch.isalnum() for ch in tok)
            assert not any(ch.isupper() for ch in tok)

    @given(st.text(max_size=120))
    @settings(max_examples=300)
    def test_idempotent_over_token_output(self, text):
        tokens = normalize(text).tokens
        assert normalize(" ".join(tokens)).tokens == tokens


class TestMatchAtom:
    def test_prefix_matches(self):
        doc = normalize("sustainable development")
        assert match_atom(doc, Prefix("sustainab"))
        assert match_atom(doc, Term("development"))

    def test_phrase_requires_contiguity(self):
        doc = normalize("social welfare protection")
        assert not match_atom(doc, Phrase((PhraseWord("social"), PhraseWord("protection"))))
        assert match_atom(doc, Phrase((PhraseWord("welfare"), PhraseWord("protection"))))

    def test_empty_doc_matches_nothing(self):
        doc = normalize("")
        assert not match_atom(doc, Term("poverty"))
        assert not match_atom(doc, Prefix("p"))
        assert not match_atom(doc, Phrase((PhraseWord("a"), PhraseWord("b"))))

    def test_phrase_at_document_end(self):
        doc = normalize("reducing child mortality")
        assert match_atom(doc, Phrase((PhraseWord("child"), PhraseWord("mortality"))))

    def test_phrase_with_prefix_words(self):
        doc = normalize("social safety nets work")
        phrase = Phrase((PhraseWord("social"), PhraseWord("safety"), PhraseWord("net", prefix=True)))
        assert match_atom(doc, phrase)

    def test_phrase_leading_prefix_word(self):
        doc = normalize("gendered violence patterns")
        assert match_atom(doc, Phrase((PhraseWord("gender", prefix=True), PhraseWord("violence"))))
        assert not match_atom(doc, Phrase((PhraseWord("violence"), PhraseWord("gender", prefix=True))))

    def test_prefix_equal_to_whole_token(self):
        doc = normalize("water")
        assert match_atom(doc, Prefix("water"))

    @given(st.lists(st.sampled_from(["aa", "ab", "abc", "b"]), max_size=12))
    def test_phrase_match_implies_word_matches(self, tokens):
        doc = normalize(" ".join(tokens))
        phrase = Phrase((PhraseWord("ab", prefix=True), PhraseWord("b")))
        if match_atom(doc, phrase):
            assert match_atom(doc, Prefix("ab"))
            assert match_atom(doc, Term("b"))

    @given(st.lists(st.sampled_from(["aa", "ab", "abc", "b"]), max_size=12))
    def test_term_implies_prefix(self, tokens):
        doc = normalize(" ".join(tokens))
        if match_atom(doc, Term("abc")):
            assert match_atom(doc, Prefix("ab"))
            assert match_atom(doc, Prefix("a"))
