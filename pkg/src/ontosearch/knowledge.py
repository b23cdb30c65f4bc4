"""Knowledge model: ontology classes, multilingual thesaurus concepts, mappings.

Serialized as three JSON files whose field names match the model exactly:

* ontology:  ``{"classes": [{"id", "labels": {lang: [label, ...]}, "parents": [...]}]}``
* thesaurus: ``{"concepts": [{"id", "pref_label": {lang: label},
  "alt_labels": {lang: [...]}, "broader": [...], "related": [...]}]}``
* mapping:   ``{"mappings": [{"class_id", "concept_id", "relation"}]}``

The label index is keyed by lemma-normalized label text (and by the plain
lowercased form, so labels in languages the lemmatizer does not cover still
match free-text queries).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    CycleDetected,
    DanglingReference,
    DuplicateId,
    MissingEnglishLabel,
    UnknownClass,
    UnknownConcept,
    UnknownEntity,
)
from .nlp import Lexicon, lemmatize, pos_tag, tokenize

MAPPING_RELATIONS = ("exactMatch", "broadMatch", "narrowMatch")


@dataclass
class OntologyClass:
    id: str
    labels: dict[str, list[str]] = field(default_factory=dict)
    parents: set[str] = field(default_factory=set)


@dataclass
class ThesaurusConcept:
    id: str
    pref_label: dict[str, str] = field(default_factory=dict)
    alt_labels: dict[str, list[str]] = field(default_factory=dict)
    broader: set[str] = field(default_factory=set)
    related: set[str] = field(default_factory=set)


@dataclass(frozen=True)
class MappingEntry:
    class_id: str
    concept_id: str
    relation: str


@dataclass
class KnowledgeBase:
    classes: dict[str, OntologyClass] = field(default_factory=dict)
    concepts: dict[str, ThesaurusConcept] = field(default_factory=dict)
    mappings: list[MappingEntry] = field(default_factory=list)
    children: dict[str, set[str]] = field(default_factory=dict)
    narrower: dict[str, set[str]] = field(default_factory=dict)
    label_index: dict[str, set[str]] = field(default_factory=dict)
    fingerprint: str = ""

    def is_class(self, entity_id: str) -> bool:
        return entity_id in self.classes

    def is_concept(self, entity_id: str) -> bool:
        return entity_id in self.concepts

    def require_entity(self, entity_id: str) -> None:
        if not (self.is_class(entity_id) or self.is_concept(entity_id)):
            raise UnknownEntity(f"unknown entity: {entity_id!r}")

    def entity_labels(self, entity_id: str) -> list[tuple[str, str]]:
        """All (language, label) pairs an entity declares; prefLabel first."""
        out: list[tuple[str, str]] = []
        if entity_id in self.concepts:
            concept = self.concepts[entity_id]
            for lang in sorted(concept.pref_label):
                out.append((lang, concept.pref_label[lang]))
            for lang in sorted(concept.alt_labels):
                out.extend((lang, lbl) for lbl in concept.alt_labels[lang])
        elif entity_id in self.classes:
            for lang in sorted(self.classes[entity_id].labels):
                out.extend((lang, lbl) for lbl in self.classes[entity_id].labels[lang])
        return out


def label_keys(text: str, lexicon: Lexicon) -> list[str]:
    """Lookup keys for one label: lemma-normalized and plain lowercase forms.

    Keys join word/number token strings with single spaces; punctuation inside
    a label (e.g. inverted headings like "bronchitis, chronic") is dropped.
    """
    tokens = [t for t in pos_tag(tokenize(text), lexicon)
              if t.kind in ("word", "number")]
    if not tokens:
        return []
    surface = " ".join(t.surface.lower() for t in tokens)
    for t in tokens:
        t.lemma = lemmatize(t, lexicon)
    lemma = " ".join(t.lemma or "" for t in tokens)
    return [lemma] if lemma == surface else [lemma, surface]


def _find_cycle(nodes: dict[str, set[str]]) -> list[str] | None:
    """Return one cycle (as an id path) in the edge map, or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    parent: dict[str, str] = {}

    for root in sorted(nodes):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(sorted(nodes[root])))]
        color[root] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in color:
                    continue
                if color[nxt] == GREY:
                    cycle = [nxt, node]
                    cur = node
                    while cur != nxt and cur in parent:
                        cur = parent[cur]
                        cycle.append(cur)
                    return list(reversed(cycle))
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    parent[nxt] = node
                    stack.append((nxt, iter(sorted(nodes[nxt]))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return None


def _check_hierarchy(edges: dict[str, set[str]], kind: str) -> None:
    for node in sorted(edges):
        for target in sorted(edges[node]):
            if target not in edges:
                raise DanglingReference(
                    f"{kind} {node!r} references unknown id {target!r}")
    cycle = _find_cycle(edges)
    if cycle:
        raise CycleDetected(f"{kind} cycle: {' -> '.join(cycle)}", detail=cycle)


def build_knowledge(classes: list[OntologyClass],
                    concepts: list[ThesaurusConcept],
                    mappings: list[MappingEntry],
                    lexicon: Lexicon | None = None,
                    fingerprint: str = "") -> KnowledgeBase:
    """Validate primary data and derive the traversal and label indices."""
    lexicon = lexicon or Lexicon.empty()
    kb = KnowledgeBase(fingerprint=fingerprint)

    for cls in classes:
        if cls.id in kb.classes:
            raise DuplicateId(f"duplicate class id {cls.id!r}")
        if not cls.labels.get("en"):
            raise MissingEnglishLabel(f"class {cls.id!r} has no English label")
        kb.classes[cls.id] = cls
    for concept in concepts:
        if concept.id in kb.concepts or concept.id in kb.classes:
            raise DuplicateId(f"duplicate concept id {concept.id!r}")
        if "en" not in concept.pref_label:
            raise MissingEnglishLabel(f"concept {concept.id!r} has no English prefLabel")
        kb.concepts[concept.id] = concept

    _check_hierarchy({c.id: c.parents for c in kb.classes.values()}, "class")
    _check_hierarchy({c.id: c.broader for c in kb.concepts.values()}, "concept")

    for concept in kb.concepts.values():
        for other in sorted(concept.related):
            if other not in kb.concepts:
                raise DanglingReference(
                    f"concept {concept.id!r} related to unknown id {other!r}")
    # normalize: related is symmetric
    for concept in list(kb.concepts.values()):
        for other in sorted(concept.related):
            kb.concepts[other].related.add(concept.id)

    seen_pairs = set()
    for entry in mappings:
        if entry.relation not in MAPPING_RELATIONS:
            raise DanglingReference(
                f"mapping {entry.class_id!r}->{entry.concept_id!r} has "
                f"unknown relation {entry.relation!r}")
        if entry.class_id not in kb.classes:
            raise DanglingReference(f"mapping references unknown class {entry.class_id!r}")
        if entry.concept_id not in kb.concepts:
            raise DanglingReference(f"mapping references unknown concept {entry.concept_id!r}")
        pair = (entry.class_id, entry.concept_id)
        if pair in seen_pairs:
            raise DuplicateId(f"duplicate mapping for {pair!r}")
        seen_pairs.add(pair)
        kb.mappings.append(entry)

    kb.children = {cid: set() for cid in kb.classes}
    for cls in kb.classes.values():
        for parent in cls.parents:
            kb.children[parent].add(cls.id)
    kb.narrower = {cid: set() for cid in kb.concepts}
    for concept in kb.concepts.values():
        for broader_id in concept.broader:
            kb.narrower[broader_id].add(concept.id)

    for entity_id in sorted(kb.classes) + sorted(kb.concepts):
        for _, label in KnowledgeBase.entity_labels(kb, entity_id):
            for key in label_keys(label, lexicon):
                kb.label_index.setdefault(key, set()).add(entity_id)
    return kb


def load_knowledge(ontology_file: str | Path, thesaurus_file: str | Path,
                   mapping_file: str | Path,
                   lexicon: Lexicon | None = None) -> KnowledgeBase:
    paths = [Path(ontology_file), Path(thesaurus_file), Path(mapping_file)]
    digest = hashlib.sha256()
    for p in paths:
        digest.update(p.read_bytes())

    onto = json.loads(paths[0].read_text(encoding="utf-8"))
    thes = json.loads(paths[1].read_text(encoding="utf-8"))
    mapping = json.loads(paths[2].read_text(encoding="utf-8"))

    classes = [OntologyClass(id=c["id"],
                             labels={k: list(v) for k, v in c.get("labels", {}).items()},
                             parents=set(c.get("parents", [])))
               for c in onto.get("classes", [])]
    concepts = [ThesaurusConcept(id=c["id"],
                                 pref_label=dict(c.get("pref_label", {})),
                                 alt_labels={k: list(v) for k, v in c.get("alt_labels", {}).items()},
                                 broader=set(c.get("broader", [])),
                                 related=set(c.get("related", [])))
                for c in thes.get("concepts", [])]
    mappings = [MappingEntry(m["class_id"], m["concept_id"], m["relation"])
                for m in mapping.get("mappings", [])]
    return build_knowledge(classes, concepts, mappings, lexicon,
                           fingerprint=digest.hexdigest())


def save_knowledge(kb: KnowledgeBase, ontology_file: str | Path,
                   thesaurus_file: str | Path, mapping_file: str | Path) -> None:
    """Write the three knowledge files back out (sorted, round-trip stable)."""
    onto = {"classes": [
        {"id": c.id,
         "labels": {lang: list(labels) for lang, labels in sorted(c.labels.items())},
         "parents": sorted(c.parents)}
        for c in sorted(kb.classes.values(), key=lambda c: c.id)]}
    thes = {"concepts": [
        {"id": c.id,
         "pref_label": dict(sorted(c.pref_label.items())),
         "alt_labels": {lang: list(v) for lang, v in sorted(c.alt_labels.items())},
         "broader": sorted(c.broader),
         "related": sorted(c.related)}
        for c in sorted(kb.concepts.values(), key=lambda c: c.id)]}
    mapping = {"mappings": [
        {"class_id": m.class_id, "concept_id": m.concept_id, "relation": m.relation}
        for m in sorted(kb.mappings, key=lambda m: (m.class_id, m.concept_id))]}
    Path(ontology_file).write_text(json.dumps(onto, ensure_ascii=False, indent=2) + "\n",
                                   encoding="utf-8")
    Path(thesaurus_file).write_text(json.dumps(thes, ensure_ascii=False, indent=2) + "\n",
                                    encoding="utf-8")
    Path(mapping_file).write_text(json.dumps(mapping, ensure_ascii=False, indent=2) + "\n",
                                  encoding="utf-8")


def _closure(start: str, edges: dict[str, set[str]]) -> set[str]:
    seen: set[str] = set()
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for nxt in edges.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    seen.discard(start)
    return seen


def descendants(kb: KnowledgeBase, class_id: str) -> set[str]:
    """All transitive subclasses of a class, excluding the class itself."""
    if class_id not in kb.classes:
        raise UnknownClass(f"unknown class: {class_id!r}")
    return _closure(class_id, kb.children)


def narrower_closure(kb: KnowledgeBase, concept_id: str) -> set[str]:
    """All transitively narrower thesaurus concepts, excluding the concept."""
    if concept_id not in kb.concepts:
        raise UnknownConcept(f"unknown concept: {concept_id!r}")
    return _closure(concept_id, kb.narrower)


def mapped_concepts(kb: KnowledgeBase, class_id: str) -> set[tuple[str, str]]:
    """All (concept id, relation) pairs mapped to a class."""
    if class_id not in kb.classes:
        raise UnknownClass(f"unknown class: {class_id!r}")
    return {(m.concept_id, m.relation) for m in kb.mappings if m.class_id == class_id}


def mapped_classes(kb: KnowledgeBase, concept_id: str) -> set[tuple[str, str]]:
    """Inverse direction of :func:`mapped_concepts`."""
    if concept_id not in kb.concepts:
        raise UnknownConcept(f"unknown concept: {concept_id!r}")
    return {(m.class_id, m.relation) for m in kb.mappings if m.concept_id == concept_id}


def find_concepts_by_prefix(kb: KnowledgeBase, prefix: str, language: str = "en",
                            limit: int = 10) -> list[tuple[str, str]]:
    """Case-insensitive typeahead over all labels, requested language first.

    Thesaurus prefLabel matches outrank other labels, then shorter labels win,
    then ids; each entity appears once, with its best-ranked matching label.
    Matching across languages doubles as a translation lookup.
    """
    if not prefix:
        return []
    needle = prefix.lower()
    scored: dict[str, tuple] = {}

    def consider(entity_id: str, label: str, lang: str, is_pref: bool):
        if not label.lower().startswith(needle):
            return
        key = (0 if lang == language else 1, 0 if is_pref else 1,
               len(label), entity_id, label)
        if entity_id not in scored or key < scored[entity_id]:
            scored[entity_id] = key

    for concept in kb.concepts.values():
        for lang, label in concept.pref_label.items():
            consider(concept.id, label, lang, True)
        for lang, labels in concept.alt_labels.items():
            for label in labels:
                consider(concept.id, label, lang, False)
    for cls in kb.classes.values():
        for lang, labels in cls.labels.items():
            for label in labels:
                consider(cls.id, label, lang, False)

    ranked = sorted(scored.items(), key=lambda kv: kv[1])
    return [(entity_id, key[4]) for entity_id, key in ranked[:limit]]
