"""Indexing: posting extraction, association extraction, term weighting."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from ontosearch.corpus import Document
from ontosearch.indexer import (
    DEFAULT_INDEXED_POS,
    IndexConfig,
    concept_weight,
    extract_associations,
    extract_postings,
    index_document,
    reindex_all,
    tf_idf,
)
from ontosearch.nlp.pipeline import PipelineConfig, run_pipeline
from ontosearch.store import DocEntry, IndexStore

from conftest import build_store, FIXTURES


def annotate(text, lexicon, kb=None, patterns=None):
    config = PipelineConfig(lexicon=lexicon, patterns=patterns or {}, kb=kb)
    return run_pipeline(Document(id="t", text=text), config)


class TestExtractPostings:
    def test_stopwords_and_short_tokens_dropped(self, lexicon):
        ann = annotate("The cough of it", lexicon)
        postings = extract_postings(ann, IndexConfig(stopwords=frozenset(lexicon.stopwords)))
        assert postings == {"cough": 1}

    def test_counts_lemmas(self, lexicon):
        ann = annotate("Nurses help nurses.", lexicon)
        postings = extract_postings(ann, IndexConfig(stopwords=frozenset(lexicon.stopwords)))
        assert postings["nurse"] == 2

    def test_pos_filter(self, lexicon):
        ann = annotate("Breathe slowly now.", lexicon)
        config = IndexConfig(stopwords=frozenset(lexicon.stopwords))
        postings = extract_postings(ann, config)
        assert "slowly" not in postings  # RB not indexed

    def test_default_pos_set_is_frozen(self):
        assert DEFAULT_INDEXED_POS == frozenset(
            {"NN", "NNS", "NNP", "JJ", "VB", "VBD", "VBG", "VBZ"})


class TestExtractAssociations:
    def test_spans_recorded(self, lexicon, kb):
        ann = annotate("Emphysema then more emphysema.", lexicon, kb=kb)
        assoc = extract_associations(ann)
        assert len(assoc["Emphysema"]) == 2
        assert len(assoc["M4"]) == 2

    def test_no_kb_no_associations(self, lexicon):
        ann = annotate("Emphysema here.", lexicon)
        assert extract_associations(ann) == {}


class TestMiniCorpusOracle:
    """Frozen numbers for the bundled 4-document corpus."""

    def test_doc_lengths(self, mini_store):
        lengths = {d: mini_store.doc_length(d) for d in ("d1", "d2", "d3", "d4")}
        assert lengths == {"d1": 18, "d2": 18, "d3": 20, "d4": 19}

    def test_emphysema_counts(self, mini_store):
        assert mini_store.term_count("emphysema", "d3") == 2
        assert mini_store.df("emphysema") == 1

    def test_tf_idf_value(self, mini_store):
        expected = (2 / 20) * math.log(4 / 1)
        assert tf_idf(mini_store, "emphysema", "d3") == pytest.approx(
            expected, abs=1e-12)
        assert expected == pytest.approx(0.13862943611198905, abs=1e-12)

    def test_association_map(self, mini_store):
        got = {e: {d: len(spans) for d, spans in docs.items()}
               for e, docs in mini_store.associations.items()}
        assert got == {
            "COPD": {"d1": 2}, "M1": {"d1": 2}, "Disease": {"d1": 1},
            "ChronicBronchitis": {"d2": 2}, "M3": {"d2": 2},
            "Emphysema": {"d3": 2}, "M4": {"d3": 2}, "M2": {"d3": 1},
            "ChronicKidneyDisease": {"d4": 2},
        }

    def test_concept_weight(self, mini_store):
        expected = (2 / 20) * math.log(4 / 1)
        assert concept_weight(mini_store, "M4", "d3") == pytest.approx(
            expected, abs=1e-12)


class TestWeightGuards:
    def test_term_in_all_docs_scores_zero(self):
        store = IndexStore()
        for doc_id in ("a", "b", "c"):
            store.put_document(DocEntry(id=doc_id, text="x"), {"common": 1}, {})
        for doc_id in ("a", "b", "c"):
            assert tf_idf(store, "common", doc_id) == 0.0

    def test_absent_term_scores_zero(self, mini_store):
        assert tf_idf(mini_store, "zzz", "d1") == 0.0
        assert concept_weight(mini_store, "M9", "d1") == 0.0

    def test_unknown_document_scores_zero(self, mini_store):
        assert tf_idf(mini_store, "emphysema", "nope") == 0.0

    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=6))
    def test_weight_nonnegative(self, df, n_docs):
        store = IndexStore()
        for i in range(n_docs):
            postings = {"term": 1} if i < df else {"other": 1}
            store.put_document(DocEntry(id=f"d{i}", text="x"), postings, {})
        for i in range(n_docs):
            assert tf_idf(store, "term", f"d{i}") >= 0.0


class TestReindex:
    def test_reindex_equals_fresh_build(self, lexicon, patterns, kb):
        store, anns = build_store(FIXTURES / "corpus-mini", lexicon, patterns, kb)
        rebuilt = reindex_all(
            [ann.doc for ann in anns],
            PipelineConfig(lexicon=lexicon, patterns=patterns, kb=kb),
            IndexConfig(stopwords=frozenset(lexicon.stopwords)),
            knowledge_fingerprint=kb.fingerprint)
        assert rebuilt == store

    def test_index_document_idempotent_after_remove(self, lexicon, patterns, kb):
        store, anns = build_store(FIXTURES / "corpus-mini", lexicon, patterns, kb)
        before = store.state()
        store.remove_document("d2")
        config = IndexConfig(stopwords=frozenset(lexicon.stopwords))
        index_document(store, anns[1], config)
        assert store.state() == before
