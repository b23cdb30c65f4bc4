"""Search: concept expansion, Boolean evaluation, metadata, free text."""

from __future__ import annotations

import pytest

from ontosearch.errors import UnknownEntity, UnsupportedLanguage
from ontosearch.query import And, ConceptRef, Keyword, Not, Or, parse_query
from ontosearch.search import (
    METADATA_FILTERS,
    eval_query,
    expand_concept,
    free_text_query,
    search_free_text,
    search_metadata,
)


def result_ids(results):
    return [r.doc_id for r in results]


class TestExpansion:
    def test_class_expansion(self, kb):
        exp = expand_concept(kb, "COPD")
        assert exp.entities == {"COPD", "ChronicBronchitis", "Emphysema",
                                "M1", "M3", "M4"}

    def test_concept_expansion_equals_class(self, kb):
        assert expand_concept(kb, "M1").entities == \
            expand_concept(kb, "COPD").entities

    def test_root_class_expansion(self, kb):
        exp = expand_concept(kb, "Disease")
        assert exp.entities == {
            "Disease", "COPD", "ChronicBronchitis", "Emphysema",
            "ChronicKidneyDisease", "Bronchiectasis", "M1", "M3", "M4", "M5"}
        assert "M6" not in exp.entities  # broadMatch never widens a class
        assert "M2" not in exp.entities  # related needs opting in

    def test_broad_concept_specializes(self, kb):
        exp = expand_concept(kb, "M6")
        assert {"Disease", "COPD", "ChronicBronchitis", "Emphysema",
                "ChronicKidneyDisease", "Bronchiectasis"} <= exp.entities

    def test_narrow_match_class_side(self, kb):
        assert expand_concept(kb, "ChronicKidneyDisease").entities == \
            {"ChronicKidneyDisease", "M5"}

    def test_exact_match_inverse(self, kb):
        exp = expand_concept(kb, "M4")
        assert exp.entities == {"M4", "Emphysema"}

    def test_related_one_hop(self, kb):
        without = expand_concept(kb, "M2").entities
        with_related = expand_concept(kb, "M2", include_related=True).entities
        assert "M1" not in without
        assert "M1" in with_related
        # one hop only: M1's narrower concepts are not pulled in via related
        assert "M3" not in with_related

    def test_trace_steps(self, kb):
        exp = expand_concept(kb, "COPD")
        steps = dict(exp.trace)
        assert steps["COPD"] == "self"
        assert steps["ChronicBronchitis"] == "subclass"
        assert steps["M1"] == "mapping"
        assert steps["M3"] in ("mapping", "narrower")

    def test_related_trace(self, kb):
        exp = expand_concept(kb, "M2", include_related=True)
        assert dict(exp.trace)["M1"] == "related"

    def test_unknown_entity(self, kb):
        with pytest.raises(UnknownEntity):
            expand_concept(kb, "Nope")


class TestEvalQuery:
    def test_concept_union_over_expansion(self, mini_store, kb, lexicon):
        node = parse_query("concept:COPD", lexicon)
        assert sorted(result_ids(eval_query(mini_store, kb, node))) == \
            ["d1", "d2", "d3"]

    def test_keyword_needs_all_lemmas(self, mini_store, kb, lexicon):
        node = parse_query('"chronic kidney disease"', lexicon)
        assert result_ids(eval_query(mini_store, kb, node)) == ["d4"]
        node = parse_query('"chronic missingword"', lexicon)
        assert result_ids(eval_query(mini_store, kb, node)) == []

    def test_and_intersects_and_sums(self, mini_store, kb, lexicon):
        a = eval_query(mini_store, kb, Keyword(("airflow",)))
        b = eval_query(mini_store, kb, Keyword(("copd",)))
        both = eval_query(mini_store, kb,
                          And((Keyword(("airflow",)), Keyword(("copd",)))))
        scores_a = {r.doc_id: r.score for r in a}
        scores_b = {r.doc_id: r.score for r in b}
        for r in both:
            assert r.score == pytest.approx(
                scores_a[r.doc_id] + scores_b[r.doc_id])
        assert set(result_ids(both)) == set(scores_a) & set(scores_b)

    def test_or_unions_and_takes_max(self, mini_store, kb, lexicon):
        a = {r.doc_id: r.score for r in
             eval_query(mini_store, kb, Keyword(("emphysema",)))}
        b = {r.doc_id: r.score for r in
             eval_query(mini_store, kb, Keyword(("spirometry",)))}
        union = eval_query(mini_store, kb,
                           Or((Keyword(("emphysema",)), Keyword(("spirometry",)))))
        for r in union:
            assert r.score == pytest.approx(
                max(a.get(r.doc_id, 0.0), b.get(r.doc_id, 0.0)))
        assert set(result_ids(union)) == set(a) | set(b)

    def test_not_complements_at_zero(self, mini_store, kb, lexicon):
        out = eval_query(mini_store, kb, Not(Keyword(("emphysema",))))
        assert sorted(result_ids(out)) == ["d1", "d2", "d4"]
        assert all(r.score == 0.0 for r in out)

    def test_and_not_subtracts(self, mini_store, kb, lexicon):
        node = parse_query("concept:COPD AND NOT emphysema", lexicon)
        assert sorted(result_ids(eval_query(mini_store, kb, node))) == \
            ["d1", "d2"]

    def test_sorted_by_score_then_id(self, eval_store, kb, lexicon):
        out = eval_query(eval_store, kb, parse_query("concept:COPD", lexicon))
        keys = [(-r.score, r.doc_id) for r in out]
        assert keys == sorted(keys)

    def test_concept_scores_use_max_weight(self, mini_store, kb, lexicon):
        out = {r.doc_id: r.score for r in
               eval_query(mini_store, kb, parse_query("concept:COPD", lexicon))}
        from ontosearch.indexer import concept_weight
        assert out["d3"] == pytest.approx(max(
            concept_weight(mini_store, e, "d3")
            for e in expand_concept(kb, "COPD").entities))


class TestMetadataSearch:
    def test_filter_names_are_pinned(self):
        assert METADATA_FILTERS == ("title", "author", "language", "source",
                                    "date_from", "date_to")

    def test_title_substring(self, mini_store):
        assert search_metadata(mini_store, {"title": "airflow"}) == ["d1"]

    def test_author_substring(self, mini_store):
        assert "d1" in search_metadata(mini_store, {"author": "chen"})

    def test_source_substring(self, mini_store):
        assert "d1" in search_metadata(mini_store,
                                       {"source": "respiratory-review"})

    def test_date_range(self, mini_store):
        out = search_metadata(mini_store, {"date_from": "2019-01-01",
                                           "date_to": "2019-12-31"})
        assert out != []
        for doc_id in out:
            assert mini_store.documents[doc_id].date.startswith("2019")

    def test_missing_date_fails_range(self, mini_store):
        from ontosearch.store import DocEntry
        from ontosearch.store import IndexStore
        store = IndexStore()
        store.put_document(DocEntry(id="nd", text="x", date=""), {"x": 1}, {})
        assert search_metadata(store, {"date_from": "2000-01-01"}) == []

    def test_unknown_filter_rejected(self, mini_store):
        with pytest.raises(ValueError):
            search_metadata(mini_store, {"flavour": "odd"})

    def test_conjunction_of_filters(self, mini_store):
        out = search_metadata(mini_store, {"language": "en",
                                           "title": "chronic bronchitis"})
        assert out == ["d2"]


class TestFreeText:
    def test_english_concept_resolution(self, kb, lexicon):
        node, concepts, keywords = free_text_query(
            "chronic bronchitis treatment", "en", kb, lexicon)
        assert [c[0] for c in concepts] == ["M3"]
        assert "treatment" in keywords

    def test_concept_preferred_over_class(self, kb, lexicon):
        _, concepts, _ = free_text_query("emphysema", "en", kb, lexicon)
        assert [c[0] for c in concepts] == ["M4"]

    def test_stopwords_not_keywords(self, kb, lexicon):
        _, _, keywords = free_text_query("the cough of", "en", kb, lexicon)
        assert keywords == ["cough"]

    def test_italian_surface_match(self, kb, lexicon):
        _, concepts, _ = free_text_query("bronchite cronica", "it", kb, lexicon)
        assert [c[0] for c in concepts] == ["M3"]

    def test_search_results_match_concept_query(self, mini_store, kb, lexicon):
        out = search_free_text(mini_store, kb, lexicon, "emphysema",
                               language="en")
        direct = eval_query(mini_store, kb, ConceptRef("M4"))
        assert [(r.doc_id, r.score) for r in out.results] == \
            [(r.doc_id, r.score) for r in direct]
        assert out.or_fallback is False

    def test_or_fallback_flagged(self, mini_store, kb, lexicon):
        # "emphysema" hits only d3, "dialysis" only d4: AND is empty, OR isn't
        out = search_free_text(mini_store, kb, lexicon,
                               "emphysema dialysis", language="en")
        assert out.or_fallback is True
        assert set(result_ids(out.results)) == {"d3", "d4"}

    def test_unmatchable_text_empty(self, mini_store, kb, lexicon):
        out = search_free_text(mini_store, kb, lexicon, "zzz qqq", language="en")
        assert out.results == []

    def test_bad_language_code(self, kb, lexicon):
        with pytest.raises(UnsupportedLanguage):
            free_text_query("anything", "e n", kb, lexicon)
