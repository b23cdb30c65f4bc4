"""Search: conceptual query expansion, Boolean evaluation, free text.

Expansion crosses the ontology/thesaurus bridge in both directions:

* a class expands to itself, its subclass closure, the concepts mapped to any
  of those classes with ``exactMatch``/``narrowMatch``, and everything
  transitively narrower than those concepts;
* a concept expands to itself, its narrower closure, the classes mapped to it
  with ``exactMatch`` (or reached against a ``broadMatch``, which also
  specializes), and those classes' subclass closures.

``related`` concepts join only on request, one hop, and are not expanded
further.  Every entity in the result carries a trace telling which step
pulled it in, so result lists can explain themselves.

Evaluation is set-based with additive AND scores and max-of OR scores; a
negated node contributes the complement of its child's documents at score
zero, which gives NOT its subtractive meaning inside AND for free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .indexer import concept_weight, tf_idf
from .knowledge import KnowledgeBase, descendants, mapped_classes, mapped_concepts, narrower_closure
from .nlp import Lexicon, lemmatize, match_thesaurus, pos_tag, tokenize
from .query import And, ConceptRef, Keyword, Not, Or, QueryNode
from .store import IndexStore
from .errors import UnsupportedLanguage

#: how an entity joined an expansion set
TRACE_STEPS = ("self", "subclass", "narrower", "mapping", "related")


@dataclass
class ExpansionSet:
    root: str
    entities: set[str] = field(default_factory=set)
    trace: dict[str, str] = field(default_factory=dict)

    def add(self, entity_id: str, step: str) -> None:
        if entity_id not in self.entities:
            self.entities.add(entity_id)
            self.trace[entity_id] = step


def expand_concept(kb: KnowledgeBase, entity_id: str,
                   include_related: bool = False) -> ExpansionSet:
    kb.require_entity(entity_id)
    exp = ExpansionSet(root=entity_id)
    exp.add(entity_id, "self")

    if kb.is_class(entity_id):
        for sub in sorted(descendants(kb, entity_id)):
            exp.add(sub, "subclass")
        class_ids = [e for e in sorted(exp.entities)]
        for class_id in class_ids:
            for concept_id, relation in sorted(mapped_concepts(kb, class_id)):
                if relation in ("exactMatch", "narrowMatch"):
                    exp.add(concept_id, "mapping")
                    for narrower_id in sorted(narrower_closure(kb, concept_id)):
                        exp.add(narrower_id, "narrower")
    else:
        for narrower_id in sorted(narrower_closure(kb, entity_id)):
            exp.add(narrower_id, "narrower")
        concept_ids = [e for e in sorted(exp.entities) if kb.is_concept(e)]
        for concept_id in concept_ids:
            for class_id, relation in sorted(mapped_classes(kb, concept_id)):
                if relation in ("exactMatch", "broadMatch"):
                    exp.add(class_id, "mapping")
                    for sub in sorted(descendants(kb, class_id)):
                        exp.add(sub, "subclass")

    if include_related:
        for concept_id in [e for e in sorted(exp.entities) if kb.is_concept(e)]:
            for rel in sorted(kb.concepts[concept_id].related):
                exp.add(rel, "related")
    return exp


@dataclass(frozen=True)
class SearchResult:
    doc_id: str
    score: float


def _keyword_docs(store: IndexStore, keyword: Keyword) -> dict[str, float]:
    """Documents containing every lemma; score is the summed TF-IDF."""
    if not keyword.lemmas:
        return {}
    doc_sets = [set(store.term_docs(lemma)) for lemma in keyword.lemmas]
    docs = set.intersection(*doc_sets) if doc_sets else set()
    return {doc: sum(tf_idf(store, lemma, doc) for lemma in keyword.lemmas)
            for doc in docs}


def _concept_docs(store: IndexStore, kb: KnowledgeBase, ref: ConceptRef,
                  include_related: bool) -> dict[str, float]:
    """Documents mentioning any entity in the expansion; score is the best
    concept weight across the expansion."""
    expansion = expand_concept(kb, ref.entity_id, include_related)
    scores: dict[str, float] = {}
    for entity_id in sorted(expansion.entities):
        for doc_id in store.entity_docs(entity_id):
            weight = concept_weight(store, entity_id, doc_id)
            if doc_id not in scores or weight > scores[doc_id]:
                scores[doc_id] = weight
    return scores


def _eval(store: IndexStore, kb: KnowledgeBase | None, node: QueryNode,
          include_related: bool) -> dict[str, float]:
    if isinstance(node, Keyword):
        return _keyword_docs(store, node)
    if isinstance(node, ConceptRef):
        if kb is None:
            raise ValueError("concept reference requires a knowledge base")
        return _concept_docs(store, kb, node, include_related)
    if isinstance(node, Not):
        inner = _eval(store, kb, node.child, include_related)
        return {doc: 0.0 for doc in store.documents if doc not in inner}
    if isinstance(node, And):
        parts = [_eval(store, kb, child, include_related) for child in node.children]
        if not parts:
            return {}
        docs = set(parts[0])
        for part in parts[1:]:
            docs &= set(part)
        return {doc: sum(part.get(doc, 0.0) for part in parts) for doc in docs}
    if isinstance(node, Or):
        parts = [_eval(store, kb, child, include_related) for child in node.children]
        merged: dict[str, float] = {}
        for part in parts:
            for doc, score in part.items():
                if doc not in merged or score > merged[doc]:
                    merged[doc] = score
        return merged
    raise TypeError(f"not a query node: {node!r}")


def eval_query(store: IndexStore, kb: KnowledgeBase | None, node: QueryNode,
               include_related: bool = False) -> list[SearchResult]:
    """Evaluate a parsed query; results sorted by score (desc), then id."""
    scores = _eval(store, kb, node, include_related)
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [SearchResult(doc_id, score) for doc_id, score in ranked]


# -- metadata search ------------------------------------------------------

METADATA_FILTERS = ("title", "author", "language", "source", "date_from", "date_to")


def search_metadata(store: IndexStore, filters: dict[str, str]) -> list[str]:
    """Filter the document table on header fields; all filters must hold.

    ``title``, ``author`` and ``source`` match case-insensitive substrings,
    ``language`` matches exactly, and ``date_from``/``date_to`` compare ISO
    date strings inclusively.
    """
    for key in filters:
        if key not in METADATA_FILTERS:
            raise ValueError(f"unknown metadata filter {key!r}")
    out = []
    for doc_id in sorted(store.documents):
        entry = store.documents[doc_id]
        if "title" in filters and filters["title"].lower() not in entry.title.lower():
            continue
        if "author" in filters:
            needle = filters["author"].lower()
            if not any(needle in a.lower() for a in entry.authors):
                continue
        if "language" in filters and entry.language != filters["language"]:
            continue
        if "source" in filters and filters["source"].lower() not in entry.source.lower():
            continue
        if "date_from" in filters and (not entry.date or entry.date < filters["date_from"]):
            continue
        if "date_to" in filters and (not entry.date or entry.date > filters["date_to"]):
            continue
        out.append(doc_id)
    return out


# -- free text ------------------------------------------------------------

@dataclass
class FreeTextResult:
    query: QueryNode
    results: list[SearchResult]
    concepts: list[tuple[str, tuple[int, int]]]  # (entity id, span in input)
    keywords: list[str]
    or_fallback: bool = False


def free_text_query(text: str, language: str, kb: KnowledgeBase,
                    lexicon: Lexicon) -> tuple[QueryNode | None, list, list]:
    """Turn free text into a structured query: concept references for label
    mentions (longest match first), keywords for the rest.

    English text is lemma-normalized; other languages match on lowercased
    surface forms, which is how non-English thesaurus labels are indexed.
    """
    if not language or not language.isalpha():
        raise UnsupportedLanguage(f"bad language code {language!r}")
    tokens = tokenize(text)
    english = language == "en"
    if english:
        pos_tag(tokens, lexicon, text)
        for t in tokens:
            t.lemma = lemmatize(t, lexicon)

    matches = match_thesaurus(tokens, kb)
    span_entities: dict[tuple[int, int], list[str]] = {}
    for m in matches:
        span_entities.setdefault(m.span, []).append(m.target)

    concepts: list[tuple[str, tuple[int, int]]] = []
    for span in sorted(span_entities):
        ids = span_entities[span]
        # prefer thesaurus concepts over classes: they carry the multilingual
        # labels, and the expansion meets in the same place either way
        chosen = sorted([i for i in ids if kb.is_concept(i)] or ids)[0]
        concepts.append((chosen, span))

    covered: list[tuple[int, int]] = [span for _, span in concepts]

    def in_match(tok) -> bool:
        return any(s <= tok.span[0] and tok.span[1] <= e for s, e in covered)

    keywords: list[str] = []
    for tok in tokens:
        if tok.kind != "word" or in_match(tok):
            continue
        term = (tok.lemma or tok.surface.lower()) if english else tok.surface.lower()
        if english and term in lexicon.stopwords:
            continue
        if term not in keywords:
            keywords.append(term)

    parts: list[QueryNode] = []
    seen_ids: set[str] = set()
    for entity_id, _ in concepts:
        if entity_id not in seen_ids:
            seen_ids.add(entity_id)
            parts.append(ConceptRef(entity_id))
    parts.extend(Keyword((term,)) for term in keywords)

    if not parts:
        return None, concepts, keywords
    node = parts[0] if len(parts) == 1 else And(tuple(parts))
    return node, concepts, keywords


def search_free_text(store: IndexStore, kb: KnowledgeBase, lexicon: Lexicon,
                     text: str, language: str = "en",
                     include_related: bool = False) -> FreeTextResult:
    """Free-text search: AND of the derived parts, falling back to OR (and
    saying so) when the conjunction matches nothing."""
    node, concepts, keywords = free_text_query(text, language, kb, lexicon)
    if node is None:
        return FreeTextResult(query=And(()), results=[], concepts=[],
                              keywords=[], or_fallback=False)
    results = eval_query(store, kb, node, include_related)
    or_fallback = False
    if not results and isinstance(node, And) and len(node.children) > 1:
        node = Or(node.children)
        results = eval_query(store, kb, node, include_related)
        or_fallback = True
    return FreeTextResult(query=node, results=results, concepts=concepts,
                          keywords=keywords, or_fallback=or_fallback)
