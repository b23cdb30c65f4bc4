"""Indexing: annotated documents -> store postings, TF-IDF, concept weights.

Weights follow the classic normalized-count formulation:

* ``tf_idf(t, d) = (count / doc_length) * ln(n_docs / df)`` with a zero
  weight when the term is absent, the document is empty, or ``df == 0``.
* ``concept_weight(e, d)`` is identical in shape with entity occurrence
  counts and the entity's document frequency in place of term statistics.

Weights are always computed from the store's current counts, never persisted,
so they can't go stale as documents are added or removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .corpus import Document
from .nlp import AnnotatedDocument, PipelineConfig, run_pipeline
from .store import DocEntry, IndexStore, Span

#: POS tags whose tokens are worth indexing: nouns, adjectives, verbs.
DEFAULT_INDEXED_POS = frozenset(
    {"NN", "NNS", "NNP", "JJ", "VB", "VBD", "VBG", "VBZ"})


@dataclass
class IndexConfig:
    indexed_pos: frozenset[str] = DEFAULT_INDEXED_POS
    min_token_len: int = 2
    stopwords: frozenset[str] = field(default_factory=frozenset)


def extract_postings(annotated: AnnotatedDocument,
                     config: IndexConfig) -> dict[str, int]:
    """Lemma counts for the content tokens worth indexing."""
    counts: dict[str, int] = {}
    for token in annotated.tokens:
        if token.kind != "word" or token.pos not in config.indexed_pos:
            continue
        lemma = token.lemma if token.lemma is not None else token.surface.lower()
        if len(lemma) < config.min_token_len or lemma in config.stopwords:
            continue
        counts[lemma] = counts.get(lemma, 0) + 1
    return counts


def extract_associations(annotated: AnnotatedDocument) -> dict[str, list[Span]]:
    """Knowledge-entity occurrence spans found by the label matchers."""
    spans: dict[str, list[Span]] = {}
    for match in annotated.matches:
        if match.matcher in ("thesaurus", "ontology"):
            spans.setdefault(match.target, []).append(match.span)
    return spans


def entry_for(doc: Document) -> DocEntry:
    return DocEntry(id=doc.id, title=doc.title, authors=list(doc.authors),
                    date=doc.date, language=doc.language, source=doc.source,
                    text=doc.text)


def index_document(store: IndexStore, annotated: AnnotatedDocument,
                   config: IndexConfig | None = None) -> None:
    """Add one analyzed document to the store."""
    config = config or IndexConfig()
    store.put_document(entry_for(annotated.doc),
                       extract_postings(annotated, config),
                       extract_associations(annotated))


def reindex_all(docs: list[Document], pipeline_config: PipelineConfig,
                index_config: IndexConfig | None = None,
                knowledge_fingerprint: str = "") -> IndexStore:
    """Build a fresh store from scratch over the given documents."""
    store = IndexStore(knowledge_fingerprint=knowledge_fingerprint)
    for doc in sorted(docs, key=lambda d: d.id):
        annotated = run_pipeline(doc, pipeline_config)
        index_document(store, annotated, index_config)
    return store


def tf_idf(store: IndexStore, term: str, doc_id: str) -> float:
    count = store.term_count(term, doc_id)
    if count == 0:
        return 0.0
    length = store.doc_length(doc_id)
    if length == 0:
        return 0.0
    df = store.df(term)
    if df == 0 or store.n_docs == 0:
        return 0.0
    return (count / length) * math.log(store.n_docs / df)


def concept_weight(store: IndexStore, entity_id: str, doc_id: str) -> float:
    occurrences = len(store.occurrences(entity_id, doc_id))
    if occurrences == 0:
        return 0.0
    length = store.doc_length(doc_id)
    if length == 0:
        return 0.0
    cdf = store.cdf(entity_id)
    if cdf == 0 or store.n_docs == 0:
        return 0.0
    return (occurrences / length) * math.log(store.n_docs / cdf)
