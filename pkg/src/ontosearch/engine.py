"""One facade over the whole stack, shared by the command line and the HTTP
service so both expose exactly the same behavior.

The engine owns the loaded lexicon, patterns, knowledge base, index store,
and candidate store.  The index snapshot remembers the knowledge-base
fingerprint it was built against; when the knowledge files change, the next
indexing run notices and rebuilds from scratch instead of mixing label
generations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import enrichment as enrich_mod
from .config import EngineConfig, load_config
from .corpus import Document, load_corpus_dir
from .errors import CorruptSnapshot, UnknownDocument, VersionUnsupported
from .evalharness import (
    EvalReport,
    JudgedQuery,
    evaluate,
    load_judgments,
    truncation_curve,
)
from .indexer import IndexConfig, index_document, reindex_all
from .knowledge import (
    KnowledgeBase,
    find_concepts_by_prefix,
    load_knowledge,
    mapped_classes,
    mapped_concepts,
)
from .nlp import PipelineConfig, load_lexicon, load_patterns, run_pipeline
from .query import QueryNode, parse_query, print_query, query_concepts
from .search import (
    SearchResult,
    eval_query,
    expand_concept,
    search_free_text,
    search_metadata,
)
from .store import IndexStore

SNIPPET_RADIUS = 80


@dataclass
class ResultView:
    doc_id: str
    score: float
    title: str
    date: str
    language: str
    snippet: str
    matched_entities: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"doc_id": self.doc_id, "score": self.score, "title": self.title,
                "date": self.date, "language": self.language,
                "snippet": self.snippet, "matched_entities": self.matched_entities}


class Engine:
    def __init__(self, config: EngineConfig):
        self.config = config
        self.lexicon = load_lexicon(config.lexicon_file,
                                    config.lemma_exceptions_file,
                                    config.stopwords_file,
                                    config.abbreviations_file)
        self.patterns = (load_patterns(config.patterns_file)
                         if Path(config.patterns_file).exists() else {})
        self.kb: KnowledgeBase = load_knowledge(config.ontology_file,
                                                config.thesaurus_file,
                                                config.mapping_file,
                                                self.lexicon)
        self.pipeline_config = PipelineConfig(lexicon=self.lexicon,
                                              patterns=self.patterns, kb=self.kb)
        self.index_config = IndexConfig(stopwords=frozenset(self.lexicon.stopwords))
        self.store = self._load_store()
        self.candidates = enrich_mod.CandidateStore(config.candidates_file)
        self.candidates.load()

    @classmethod
    def from_config_file(cls, path: str | Path) -> "Engine":
        return cls(load_config(path))

    def _load_store(self) -> IndexStore:
        snapshot = Path(self.config.snapshot_file)
        if snapshot.exists():
            try:
                store = IndexStore.load_snapshot(snapshot)
            except (CorruptSnapshot, VersionUnsupported):
                raise
            if store.knowledge_fingerprint == self.kb.fingerprint:
                return store
        return IndexStore(knowledge_fingerprint=self.kb.fingerprint)

    # -- indexing --------------------------------------------------------

    def index_corpus(self, rebuild: bool = False) -> dict:
        """Bring the index in line with the corpus directory.

        Unchanged documents are left alone; new, changed, and deleted ones
        are applied incrementally.  ``rebuild`` forces a from-scratch build,
        as does a knowledge-base change (stale fingerprint).
        """
        load = load_corpus_dir(self.config.corpus_dir)
        docs = {doc.id: doc for doc in load.documents}

        stale_kb = self.store.knowledge_fingerprint != self.kb.fingerprint
        if rebuild or stale_kb:
            self.store = reindex_all(list(docs.values()), self.pipeline_config,
                                     self.index_config, self.kb.fingerprint)
            added, removed, updated = len(docs), 0, 0
        else:
            added = removed = updated = 0
            for doc_id in sorted(set(self.store.documents) - set(docs)):
                self.store.remove_document(doc_id)
                removed += 1
            for doc_id in sorted(docs):
                doc = docs[doc_id]
                if self.store.has_document(doc_id):
                    if self.store.documents[doc_id].text == doc.text:
                        continue
                    self.store.remove_document(doc_id)
                    updated += 1
                else:
                    added += 1
                index_document(self.store, run_pipeline(doc, self.pipeline_config),
                               self.index_config)
        self.store.save_snapshot(self.config.snapshot_file)
        stats = self.store.stats()
        stats.update({"added": added, "removed": removed, "updated": updated,
                      "rebuilt": bool(rebuild or stale_kb),
                      "warnings": list(load.manifest.warnings)})
        return stats

    def add_document(self, doc: Document) -> None:
        index_document(self.store, run_pipeline(doc, self.pipeline_config),
                       self.index_config)
        self.store.save_snapshot(self.config.snapshot_file)

    def remove_document(self, doc_id: str) -> None:
        self.store.remove_document(doc_id)
        self.store.save_snapshot(self.config.snapshot_file)

    # -- search ----------------------------------------------------------

    def parse(self, query_text: str) -> QueryNode:
        return parse_query(query_text, self.lexicon)

    def search(self, query_text: str, include_related: bool = False,
               limit: int | None = None) -> dict:
        node = self.parse(query_text)
        results = eval_query(self.store, self.kb, node, include_related)
        return self._render(node, results, include_related, limit)

    def search_text(self, text: str, language: str = "en",
                    include_related: bool = False,
                    limit: int | None = None) -> dict:
        outcome = search_free_text(self.store, self.kb, self.lexicon, text,
                                   language, include_related)
        rendered = self._render(outcome.query, outcome.results,
                                include_related, limit)
        rendered["or_fallback"] = outcome.or_fallback
        rendered["concepts"] = [
            {"entity_id": entity_id, "span": list(span)}
            for entity_id, span in outcome.concepts]
        rendered["keywords"] = list(outcome.keywords)
        return rendered

    def search_fields(self, filters: dict[str, str]) -> dict:
        doc_ids = search_metadata(self.store, filters)
        views = [self._result_view(SearchResult(doc_id, 0.0), set())
                 for doc_id in doc_ids]
        return {"query": filters, "total": len(views),
                "results": [v.to_dict() for v in views]}

    def _render(self, node: QueryNode, results: list[SearchResult],
                include_related: bool, limit: int | None) -> dict:
        expansions = {}
        expansion_entities: set[str] = set()
        for entity_id in sorted(query_concepts(node)):
            exp = expand_concept(self.kb, entity_id, include_related)
            expansions[entity_id] = {"entities": sorted(exp.entities),
                                     "trace": dict(sorted(exp.trace.items()))}
            expansion_entities |= exp.entities
        shown = results if limit is None else results[:limit]
        views = [self._result_view(r, expansion_entities) for r in shown]
        return {"query": print_query(node), "total": len(results),
                "results": [v.to_dict() for v in views],
                "expansion": expansions}

    def _result_view(self, result: SearchResult, entities: set[str]) -> ResultView:
        entry = self.store.documents[result.doc_id]
        matched = sorted(e for e in entities
                         if self.store.occurrences(e, result.doc_id))
        spans = []
        for entity_id in matched:
            spans.extend(self.store.occurrences(entity_id, result.doc_id))
        snippet = self._snippet(entry.text, min(spans) if spans else None)
        return ResultView(doc_id=result.doc_id, score=result.score,
                          title=entry.title, date=entry.date,
                          language=entry.language, snippet=snippet,
                          matched_entities=matched)

    @staticmethod
    def _snippet(text: str, span: tuple[int, int] | None) -> str:
        if not text:
            return ""
        if span is None:
            head = text[:2 * SNIPPET_RADIUS]
            return head + ("…" if len(text) > len(head) else "")
        start = max(0, span[0] - SNIPPET_RADIUS)
        end = min(len(text), span[1] + SNIPPET_RADIUS)
        prefix = "…" if start > 0 else ""
        suffix = "…" if end < len(text) else ""
        return prefix + text[start:end] + suffix

    # -- knowledge views -------------------------------------------------

    def suggest(self, prefix: str, language: str = "en", limit: int = 10) -> list[dict]:
        out = []
        for entity_id, label in find_concepts_by_prefix(self.kb, prefix,
                                                        language, limit):
            out.append({"entity_id": entity_id, "label": label,
                        "kind": "class" if self.kb.is_class(entity_id) else "concept",
                        "document_count": self.store.cdf(entity_id)})
        return out

    def ontology_tree(self) -> list[dict]:
        """Root-down class tree with mapped-concept leaves, for the browser UI."""
        def node_for(class_id: str) -> dict:
            cls = self.kb.classes[class_id]
            concepts = [{"entity_id": cid, "relation": rel,
                         "label": self.kb.concepts[cid].pref_label.get("en", cid)}
                        for cid, rel in sorted(mapped_concepts(self.kb, class_id))]
            return {"entity_id": class_id,
                    "label": cls.labels.get("en", [class_id])[0],
                    "document_count": self.store.cdf(class_id),
                    "concepts": concepts,
                    "children": [node_for(child)
                                 for child in sorted(self.kb.children[class_id])]}

        roots = sorted(cid for cid, cls in self.kb.classes.items() if not cls.parents)
        return [node_for(root) for root in roots]

    def entity_card(self, entity_id: str) -> dict:
        self.kb.require_entity(entity_id)
        card: dict = {"entity_id": entity_id,
                      "labels": [{"language": lang, "label": label}
                                 for lang, label in self.kb.entity_labels(entity_id)],
                      "document_count": self.store.cdf(entity_id)}
        if self.kb.is_class(entity_id):
            cls = self.kb.classes[entity_id]
            card.update({"kind": "class", "parents": sorted(cls.parents),
                         "children": sorted(self.kb.children[entity_id]),
                         "mappings": [{"entity_id": cid, "relation": rel}
                                      for cid, rel in sorted(mapped_concepts(self.kb, entity_id))]})
        else:
            concept = self.kb.concepts[entity_id]
            card.update({"kind": "concept", "broader": sorted(concept.broader),
                         "narrower": sorted(self.kb.narrower[entity_id]),
                         "related": sorted(concept.related),
                         "mappings": [{"entity_id": cid, "relation": rel}
                                      for cid, rel in sorted(mapped_classes(self.kb, entity_id))]})
        return card

    def document_card(self, doc_id: str) -> dict:
        if not self.store.has_document(doc_id):
            raise UnknownDocument(f"document not indexed: {doc_id!r}")
        entry = self.store.documents[doc_id]
        mentioned = sorted(entity_id for entity_id in self.store.associations
                           if self.store.occurrences(entity_id, doc_id))
        return {"doc_id": doc_id, "title": entry.title, "authors": entry.authors,
                "date": entry.date, "language": entry.language,
                "source": entry.source, "text": entry.text,
                "doc_length": entry.doc_length, "entities": mentioned}

    # -- enrichment ------------------------------------------------------

    def run_enrichment(self) -> dict:
        """Extract, score, and rank candidates from the indexed corpus."""
        docs = [Document(id=e.id, title=e.title, authors=list(e.authors),
                         date=e.date, language=e.language, source=e.source,
                         text=e.text)
                for e in self.store.documents.values()]
        annotated = [run_pipeline(doc, self.pipeline_config)
                     for doc in sorted(docs, key=lambda d: d.id)]
        found = enrich_mod.extract_candidates(
            annotated, self.kb, self.lexicon,
            min_frequency=self.config.min_candidate_frequency)
        enrich_mod.score_candidates(found, self.store, self.kb, self.lexicon,
                                    self.patterns)
        for cand in found:
            enrich_mod.suggest_parents(cand, self.store, self.kb, self.lexicon)
        new_ids = self.candidates.add_candidates(found)
        self.candidates.save()
        return {"candidates": len(found), "new": len(new_ids),
                "ids": [c.id for c in found]}

    def list_candidates(self, state: str | None = None) -> list[dict]:
        return [c.to_dict() for c in self.candidates.list(state)]

    def set_candidate_state(self, candidate_id: str, state: str,
                            note: str = "") -> dict:
        cand = self.candidates.set_state(candidate_id, state, note)
        self.candidates.save()
        return cand.to_dict()

    def export_suggestions(self) -> dict:
        return self.candidates.export_accepted()

    # -- evaluation ------------------------------------------------------

    def run_judged_query(self, query: JudgedQuery) -> list[str]:
        if query.mode == "boolean":
            node = self.parse(query.text)
            results = eval_query(self.store, self.kb, node)
        else:
            results = search_free_text(self.store, self.kb, self.lexicon,
                                       query.text, query.language).results
        return [r.doc_id for r in results]

    def evaluate_file(self, judgments_path: str | Path,
                      beta: float = 1.0) -> EvalReport:
        judgments = load_judgments(judgments_path)
        return evaluate(self.run_judged_query, judgments, beta)

    def curve_file(self, judgments_path: str | Path, beta: float = 1.0):
        judgments = load_judgments(judgments_path)
        return truncation_curve(self.run_judged_query, judgments, beta)

    # -- misc ------------------------------------------------------------

    def stats(self) -> dict:
        stats = self.store.stats()
        stats.update({"classes": len(self.kb.classes),
                      "concepts": len(self.kb.concepts),
                      "mappings": len(self.kb.mappings),
                      "candidates": len(self.candidates.candidates),
                      "knowledge_fingerprint": self.kb.fingerprint})
        return stats

    def list_documents(self) -> list[dict]:
        out = []
        for doc_id in sorted(self.store.documents):
            entry = self.store.documents[doc_id]
            out.append({"doc_id": doc_id, "title": entry.title,
                        "date": entry.date, "language": entry.language,
                        "doc_length": entry.doc_length})
        return out
