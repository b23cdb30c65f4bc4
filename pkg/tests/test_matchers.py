"""Annotation matchers: regex rules, dictionary lookup, label matching."""

from __future__ import annotations

import pytest

from ontosearch.corpus import Document
from ontosearch.errors import InvalidPattern
from ontosearch.nlp.matchers import load_patterns
from ontosearch.nlp.pipeline import PipelineConfig, run_pipeline


def annotate(text, lexicon, *, patterns=None, kb=None):
    config = PipelineConfig(lexicon=lexicon, patterns=patterns or {}, kb=kb)
    return run_pipeline(Document(id="t", text=text), config)


def matches_of(ann, matcher):
    return [(m.target, ann.doc.text[m.span[0]:m.span[1]])
            for m in ann.matches if m.matcher == matcher]


class TestLoadPatterns:
    def test_bundled_patterns(self, patterns):
        assert set(patterns) >= {"measurements", "year", "code"}

    def test_comments_skipped(self, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("# comment\nids=[a-z]+\n", encoding="utf-8")
        assert set(load_patterns(f)) == {"ids"}

    def test_missing_equals_rejected(self, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("justaname\n", encoding="utf-8")
        with pytest.raises(InvalidPattern):
            load_patterns(f)

    def test_bad_regex_rejected(self, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("broken=[unclosed\n", encoding="utf-8")
        with pytest.raises(InvalidPattern):
            load_patterns(f)

    def test_duplicate_name_rejected(self, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("a=x\na=y\n", encoding="utf-8")
        with pytest.raises(InvalidPattern):
            load_patterns(f)


class TestRegexMatcher:
    def test_year_and_measurement(self, lexicon, patterns):
        ann = annotate("In 2019 the FEV1 dropped.", lexicon, patterns=patterns)
        found = matches_of(ann, "regex")
        assert ("year", "2019") in found
        assert ("measurements", "FEV1") in found

    def test_code_pattern_with_decimal(self, lexicon, patterns):
        ann = annotate("Coded as j44.9 here.", lexicon, patterns=patterns)
        assert ("code", "j44.9") not in matches_of(ann, "regex")  # dot splits tokens
        ann2 = annotate("Coded as j44 here.", lexicon, patterns=patterns)
        assert ("code", "j44") in matches_of(ann2, "regex")

    def test_fullmatch_only(self, lexicon, patterns):
        ann = annotate("The word waterfall2019x stays.", lexicon, patterns=patterns)
        assert not any(t == "year" for t, _ in matches_of(ann, "regex"))


class TestDictionaryMatcher:
    def test_lemma_membership(self, lexicon):
        ann = annotate("Nebulizers hummed.", lexicon)
        assert ("nebulizer", "Nebulizers") in matches_of(ann, "dictionary")

    def test_unknown_word_unmatched(self, lexicon):
        ann = annotate("The zyxwv hummed.", lexicon)
        assert not any(s == "zyxwv" for _, s in matches_of(ann, "dictionary"))


class TestLabelMatchers:
    def test_class_and_concept_share_label(self, lexicon, kb):
        ann = annotate("Severe emphysema progressed.", lexicon, kb=kb)
        assert ("Emphysema", "emphysema") in matches_of(ann, "ontology")
        assert ("M4", "emphysema") in matches_of(ann, "thesaurus")

    def test_longest_label_wins(self, lexicon, kb):
        ann = annotate("Chronic obstructive pulmonary disease progressed.",
                       lexicon, kb=kb)
        ontology = matches_of(ann, "ontology")
        assert ("COPD", "Chronic obstructive pulmonary disease") in ontology
        # the 4-token label consumed "disease"; no nested 1-token match inside
        assert ("Disease", "disease") not in ontology

    def test_matching_resumes_after_phrase(self, lexicon, kb):
        ann = annotate("Chronic bronchitis and emphysema overlap.", lexicon, kb=kb)
        targets = {t for t, _ in matches_of(ann, "ontology")}
        assert {"ChronicBronchitis", "Emphysema"} <= targets

    def test_lemma_key_matches_inflection(self, lexicon, kb):
        ann = annotate("Both medical devices failed.", lexicon, kb=kb)
        assert ("Device", "medical devices") in matches_of(ann, "ontology")

    def test_surface_key_matches_acronym(self, lexicon, kb):
        ann = annotate("CKD progressed slowly.", lexicon, kb=kb)
        assert ("ChronicKidneyDisease", "CKD") in matches_of(ann, "ontology")

    def test_non_english_surface_label(self, lexicon, kb):
        ann = annotate("La bronchite cronica peggiora.", lexicon, kb=kb)
        assert ("M3", "bronchite cronica") in matches_of(ann, "thesaurus")

    def test_match_ordering_is_stable(self, lexicon, patterns, kb):
        ann = annotate("Emphysema shows in 2019 spirometry.", lexicon,
                       patterns=patterns, kb=kb)
        keys = [(m.span, m.matcher, m.target) for m in ann.matches]
        assert keys == sorted(keys, key=lambda k: (k[0],
                              {"regex": 0, "dictionary": 1,
                               "thesaurus": 2, "ontology": 3}[k[1]], k[2]))
