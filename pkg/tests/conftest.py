"""Shared fixtures: the bundled lexicon/KB and indexed fixture corpora.

Everything heavyweight is session-scoped and read-only; tests that mutate a
store build their own copy via :func:`build_store`.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from ontosearch.corpus import load_corpus_dir
from ontosearch.indexer import IndexConfig, index_document
from ontosearch.knowledge import KnowledgeBase, load_knowledge
from ontosearch.nlp.lexicon import Lexicon, load_lexicon
from ontosearch.nlp.matchers import load_patterns
from ontosearch.nlp.pipeline import AnnotatedDocument, PipelineConfig, run_pipeline
from ontosearch.store import IndexStore

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return load_lexicon(
        FIXTURES / "lexicon/entries.jsonl",
        FIXTURES / "lexicon/lemma-exceptions.txt",
        FIXTURES / "lexicon/stopwords.txt",
        FIXTURES / "lexicon/abbreviations.txt",
    )


@pytest.fixture(scope="session")
def patterns():
    return load_patterns(FIXTURES / "lexicon/patterns.txt")


@pytest.fixture(scope="session")
def kb() -> KnowledgeBase:
    return load_knowledge(
        FIXTURES / "kb/ontology.json",
        FIXTURES / "kb/thesaurus.json",
        FIXTURES / "kb/mapping.json",
    )


def build_store(corpus_dir: Path, lexicon: Lexicon, patterns: dict,
                kb: KnowledgeBase) -> tuple[IndexStore, list[AnnotatedDocument]]:
    """Index one fixture corpus from scratch; returns the store and annotations."""
    pipeline_config = PipelineConfig(lexicon=lexicon, patterns=patterns, kb=kb)
    index_config = IndexConfig(stopwords=frozenset(lexicon.stopwords))
    store = IndexStore(knowledge_fingerprint=kb.fingerprint)
    annotated = []
    for doc in load_corpus_dir(corpus_dir).documents:
        ann = run_pipeline(doc, pipeline_config)
        annotated.append(ann)
        index_document(store, ann, index_config)
    return store, annotated


@pytest.fixture(scope="session")
def mini_indexed(lexicon, patterns, kb):
    return build_store(FIXTURES / "corpus-mini", lexicon, patterns, kb)


@pytest.fixture(scope="session")
def mini_store(mini_indexed) -> IndexStore:
    return mini_indexed[0]


@pytest.fixture(scope="session")
def eval_indexed(lexicon, patterns, kb):
    return build_store(FIXTURES / "corpus-eval", lexicon, patterns, kb)


@pytest.fixture(scope="session")
def eval_store(eval_indexed) -> IndexStore:
    return eval_indexed[0]


@pytest.fixture
def config_file(tmp_path) -> Path:
    """A config pointing at the bundled fixtures with outputs under tmp."""
    config = {
        "corpus_dir": str(FIXTURES / "corpus-eval"),
        "ontology_file": str(FIXTURES / "kb/ontology.json"),
        "thesaurus_file": str(FIXTURES / "kb/thesaurus.json"),
        "mapping_file": str(FIXTURES / "kb/mapping.json"),
        "lexicon_file": str(FIXTURES / "lexicon/entries.jsonl"),
        "lemma_exceptions_file": str(FIXTURES / "lexicon/lemma-exceptions.txt"),
        "stopwords_file": str(FIXTURES / "lexicon/stopwords.txt"),
        "abbreviations_file": str(FIXTURES / "lexicon/abbreviations.txt"),
        "patterns_file": str(FIXTURES / "lexicon/patterns.txt"),
        "snapshot_file": str(tmp_path / "var/index.snapshot"),
        "candidates_file": str(tmp_path / "var/candidates.json"),
        "min_candidate_frequency": 2,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return path


@pytest.fixture
def mini_config_file(tmp_path, config_file) -> Path:
    """Same as config_file but indexing the four-document mini corpus."""
    config = json.loads(config_file.read_text(encoding="utf-8"))
    config["corpus_dir"] = str(FIXTURES / "corpus-mini")
    path = tmp_path / "config-mini.json"
    path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return path
