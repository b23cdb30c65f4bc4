"""Query language: scanning, parsing, precedence, printing, round-trips."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from ontosearch.errors import QuerySyntaxError
from ontosearch.nlp.lexicon import Lexicon, LexiconEntry
from ontosearch.query import (
    And,
    ConceptRef,
    Keyword,
    Not,
    Or,
    keyword_lemmas,
    parse_query,
    print_query,
    query_concepts,
)


@pytest.fixture(scope="module")
def plain_lexicon():
    """A lexicon whose words are lemma fixpoints, for structural tests."""
    words = ["alpha", "beta", "gamma", "delta", "cough", "airflow", "mucus"]
    return Lexicon(entries={w: LexiconEntry(pos_frequencies={"NN": 1})
                            for w in words})


class TestParsing:
    def test_single_word(self, plain_lexicon):
        assert parse_query("alpha", plain_lexicon) == Keyword(("alpha",))

    def test_quoted_phrase_multi_lemma(self, plain_lexicon):
        assert parse_query('"alpha beta"', plain_lexicon) == \
            Keyword(("alpha", "beta"))

    def test_concept_ref(self, plain_lexicon):
        assert parse_query("concept:COPD", plain_lexicon) == ConceptRef("COPD")

    def test_implicit_and(self, plain_lexicon):
        assert parse_query("alpha beta", plain_lexicon) == \
            And((Keyword(("alpha",)), Keyword(("beta",))))

    def test_explicit_and(self, plain_lexicon):
        assert parse_query("alpha AND beta", plain_lexicon) == \
            And((Keyword(("alpha",)), Keyword(("beta",))))

    def test_precedence_or_over_and(self, plain_lexicon):
        node = parse_query("alpha OR beta AND gamma", plain_lexicon)
        assert node == Or((Keyword(("alpha",)),
                           And((Keyword(("beta",)), Keyword(("gamma",))))))

    def test_not_binds_tighter_than_and(self, plain_lexicon):
        node = parse_query("NOT alpha AND beta", plain_lexicon)
        assert node == And((Not(Keyword(("alpha",))), Keyword(("beta",))))

    def test_parentheses_override(self, plain_lexicon):
        node = parse_query("(alpha OR beta) AND gamma", plain_lexicon)
        assert node == And((Or((Keyword(("alpha",)), Keyword(("beta",)))),
                            Keyword(("gamma",))))

    def test_double_not(self, plain_lexicon):
        assert parse_query("NOT NOT alpha", plain_lexicon) == \
            Not(Not(Keyword(("alpha",))))

    def test_lowercase_operators_are_words(self, plain_lexicon):
        node = parse_query("alpha or beta", plain_lexicon)
        assert node == And((Keyword(("alpha",)), Keyword(("or",)),
                            Keyword(("beta",))))

    def test_single_child_groups_collapse(self, plain_lexicon):
        assert parse_query("((alpha))", plain_lexicon) == Keyword(("alpha",))


class TestParseErrors:
    @pytest.mark.parametrize("text, fragment", [
        ("", "empty"),
        ("   ", "empty"),
        ("alpha AND", "unexpected"),
        ("AND alpha", "unexpected"),
        ("(alpha", "expected"),
        ("()", "empty group"),
        ("alpha)", "unexpected"),
        ('"unterminated', "quote"),
        ("concept:", "concept"),
        ("NOT", "unexpected"),
    ])
    def test_syntax_errors(self, plain_lexicon, text, fragment):
        with pytest.raises(QuerySyntaxError) as exc:
            parse_query(text, plain_lexicon)
        assert fragment in str(exc.value).lower()
        assert isinstance(exc.value.detail, dict)
        assert "position" in exc.value.detail

    def test_position_points_at_offender(self, plain_lexicon):
        with pytest.raises(QuerySyntaxError) as exc:
            parse_query("alpha )", plain_lexicon)
        assert exc.value.detail["position"] == 6


class TestKeywordLemmas:
    def test_stopwords_dropped(self):
        lexicon = Lexicon(entries={}, stopwords={"the", "of"})
        assert keyword_lemmas("the cough of", lexicon) == ("cough",)

    def test_all_stopwords_kept(self):
        lexicon = Lexicon(entries={}, stopwords={"the", "of"})
        assert keyword_lemmas("the of", lexicon) == ("the", "of")

    def test_lemmatized(self, lexicon):
        assert keyword_lemmas("running nurses", lexicon) == ("run", "nurse")


class TestPrintQuery:
    def test_bare_word(self, plain_lexicon):
        assert print_query(Keyword(("alpha",))) == "alpha"

    def test_multi_lemma_quoted(self):
        assert print_query(Keyword(("alpha", "beta"))) == '"alpha beta"'

    def test_operator_lookalike_quoted(self):
        assert print_query(Keyword(("AND",))) == '"AND"'

    def test_concept_prefix_quoted(self):
        assert print_query(Keyword(("concept:x",))) == '"concept:x"'

    def test_nested_fully_parenthesized(self):
        node = Or((Keyword(("a",)), And((Keyword(("b",)), Not(Keyword(("c",)))))))
        assert print_query(node) == "(a OR (b AND NOT c))"

    def test_concept_ref(self):
        assert print_query(ConceptRef("M1")) == "concept:M1"


class TestQueryConcepts:
    def test_collects_all_refs(self, plain_lexicon):
        node = parse_query("concept:A AND (concept:B OR NOT concept:C) alpha",
                           plain_lexicon)
        assert query_concepts(node) == {"A", "B", "C"}


# --- structural round-trip property ------------------------------------------

_WORDS = ["alpha", "beta", "gamma", "delta", "cough", "airflow", "mucus"]
_IDS = ["COPD", "M1", "Disease.v2", "a-b_c"]

_leaf = st.one_of(
    st.sampled_from(_WORDS).map(lambda w: Keyword((w,))),
    st.lists(st.sampled_from(_WORDS), min_size=2, max_size=3)
      .map(lambda ws: Keyword(tuple(ws))),
    st.sampled_from(_IDS).map(ConceptRef),
)


def _compound(children):
    return st.one_of(
        children.map(Not),
        st.lists(children, min_size=2, max_size=3).map(lambda c: And(tuple(c))),
        st.lists(children, min_size=2, max_size=3).map(lambda c: Or(tuple(c))),
    )


_ast = st.recursive(_leaf, _compound, max_leaves=12)


class TestRoundTrip:
    @settings(max_examples=300, deadline=None)
    @given(_ast)
    def test_print_parse_identity(self, plain_lexicon, node):
        assert parse_query(print_query(node), plain_lexicon) == node

    @settings(max_examples=100, deadline=None)
    @given(_ast)
    def test_printing_is_stable(self, plain_lexicon, node):
        text = print_query(node)
        assert print_query(parse_query(text, plain_lexicon)) == text
