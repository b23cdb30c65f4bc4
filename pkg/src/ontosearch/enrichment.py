"""Vocabulary enrichment: mine candidate terms, score them, suggest parents,
and track them through a curation workflow.

Candidates are noun-phrase chunks (one to five tokens) seen at least twice
across the corpus whose normalized form is not already a knowledge-base
label.  Each is scored against eight evidence components, equally weighted,
every component in [0, 1]:

* ``avg_tfidf``    - mean TF-IDF of the candidate's lemmas in the documents
                     where it occurs, min-max normalized across the batch;
* ``dictionary``   - head lemma has a lexicon entry;
* ``thesaurus``    - shares a lemma with an existing knowledge-base label;
* ``regex``        - a token matches a curated pattern (units, codes...);
* ``synonym``      - a lexicon synonym of the head lemma is a known label;
* ``subclass``     - a proper suffix of the phrase (e.g. its head) is a known
                     label, the "chronic X is an X" signal;
* ``cooccurrence`` - fraction of its documents that also mention a known
                     entity;
* ``proximity``    - occurs in the same sentence as a known entity mention.

The weighted combination is kept separately from the common-word penalty
(x0.5 when the head lemma appears in at least half the corpus), so the final
score is ``weighted_score * penalty``.

Workflow states: new -> to_validate | postponed | rejected;
to_validate -> accepted | rejected | postponed; postponed -> to_validate |
rejected; accepted and rejected are terminal.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable

from .errors import IllegalTransition, IoFailure, UnknownCandidate
from .indexer import tf_idf
from .knowledge import KnowledgeBase
from .nlp import AnnotatedDocument, Lexicon, lemmatize, pos_tag, split_sentences, tokenize
from .store import IndexStore, Span

SCORE_COMPONENTS = ("avg_tfidf", "dictionary", "thesaurus", "regex",
                    "synonym", "subclass", "cooccurrence", "proximity")

WORKFLOW_STATES = ("new", "to_validate", "postponed", "accepted", "rejected")

TRANSITIONS: dict[str, frozenset[str]] = {
    "new": frozenset({"to_validate", "postponed", "rejected"}),
    "to_validate": frozenset({"accepted", "rejected", "postponed"}),
    "postponed": frozenset({"to_validate", "rejected"}),
    "accepted": frozenset(),
    "rejected": frozenset(),
}

MAX_CANDIDATE_TOKENS = 5
COMMON_WORD_DOC_FRACTION = 0.5
COMMON_WORD_PENALTY = 0.5


@dataclass
class ScoreBreakdown:
    components: dict[str, float] = field(default_factory=dict)
    weights: dict[str, float] = field(
        default_factory=lambda: {c: 1.0 / len(SCORE_COMPONENTS)
                                 for c in SCORE_COMPONENTS})
    weighted_score: float = 0.0
    penalty: float = 1.0

    def recompute(self) -> None:
        total_weight = sum(self.weights.values())
        self.weighted_score = (
            sum(self.weights[c] * self.components.get(c, 0.0) for c in self.weights)
            / total_weight if total_weight else 0.0)

    @property
    def score(self) -> float:
        return self.weighted_score * self.penalty

    def to_dict(self) -> dict:
        return {"components": dict(self.components), "weights": dict(self.weights),
                "weighted_score": self.weighted_score, "penalty": self.penalty}

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreBreakdown":
        b = cls(components=dict(data.get("components", {})),
                weights=dict(data.get("weights", {})),
                weighted_score=float(data.get("weighted_score", 0.0)),
                penalty=float(data.get("penalty", 1.0)))
        return b


@dataclass(frozen=True)
class ParentSuggestion:
    parent: str    # entity id when resolved, else normalized label text
    detector: str  # hearst:such_as | hearst:and_other | hearst:including
                   # | head_noun | dictionary
    evidence: str  # the sentence or lexicon entry that triggered it
    resolved: bool = False

    def to_dict(self) -> dict:
        return {"parent": self.parent, "detector": self.detector,
                "evidence": self.evidence, "resolved": self.resolved}


@dataclass
class Candidate:
    id: str
    lemmas: tuple[str, ...]
    surface: str
    frequency: int = 0
    doc_ids: list[str] = field(default_factory=list)
    occurrences: list[tuple[str, Span]] = field(default_factory=list)
    state: str = "new"
    score: float = 0.0
    breakdown: ScoreBreakdown | None = None
    parents: list[ParentSuggestion] = field(default_factory=list)

    @property
    def head(self) -> str:
        return self.lemmas[-1]

    def to_dict(self) -> dict:
        return {
            "id": self.id, "lemmas": list(self.lemmas), "surface": self.surface,
            "frequency": self.frequency, "doc_ids": list(self.doc_ids),
            "occurrences": [[doc, list(span)] for doc, span in self.occurrences],
            "state": self.state, "score": self.score,
            "breakdown": self.breakdown.to_dict() if self.breakdown else None,
            "parents": [p.to_dict() for p in self.parents],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Candidate":
        breakdown = data.get("breakdown")
        return cls(
            id=data["id"], lemmas=tuple(data["lemmas"]),
            surface=data.get("surface", ""),
            frequency=int(data.get("frequency", 0)),
            doc_ids=list(data.get("doc_ids", [])),
            occurrences=[(doc, (int(s), int(e)))
                         for doc, (s, e) in data.get("occurrences", [])],
            state=data.get("state", "new"), score=float(data.get("score", 0.0)),
            breakdown=ScoreBreakdown.from_dict(breakdown) if breakdown else None,
            parents=[ParentSuggestion(p["parent"], p["detector"], p["evidence"],
                                      bool(p.get("resolved", False)))
                     for p in data.get("parents", [])],
        )


def candidate_id(lemmas: Iterable[str]) -> str:
    return "cand-" + "-".join(lemmas)


# -- extraction -----------------------------------------------------------

def extract_candidates(annotated_docs: list[AnnotatedDocument],
                       kb: KnowledgeBase, lexicon: Lexicon,
                       min_frequency: int = 2) -> list[Candidate]:
    """Collect repeated noun phrases that the knowledge base does not know."""
    by_id: dict[str, Candidate] = {}
    surface_votes: dict[str, dict[str, int]] = {}

    for annotated in annotated_docs:
        text = annotated.doc.text
        for chunk in annotated.chunks:
            lemmas = tuple(chunk.lemma_seq)
            if not (1 <= len(lemmas) <= MAX_CANDIDATE_TOKENS):
                continue
            key = " ".join(lemmas)
            surface = text[chunk.span[0]:chunk.span[1]]
            if key in kb.label_index or surface.lower() in kb.label_index:
                continue
            cid = candidate_id(lemmas)
            cand = by_id.get(cid)
            if cand is None:
                cand = by_id[cid] = Candidate(id=cid, lemmas=lemmas, surface=surface)
                surface_votes[cid] = {}
            cand.frequency += 1
            cand.occurrences.append((annotated.doc.id, chunk.span))
            if annotated.doc.id not in cand.doc_ids:
                cand.doc_ids.append(annotated.doc.id)
            votes = surface_votes[cid]
            votes[surface] = votes.get(surface, 0) + 1

    out = []
    for cid in sorted(by_id):
        cand = by_id[cid]
        if cand.frequency < min_frequency:
            continue
        votes = surface_votes[cid]
        cand.surface = max(sorted(votes), key=lambda s: votes[s])
        cand.doc_ids.sort()
        cand.occurrences.sort()
        out.append(cand)
    return out


# -- scoring --------------------------------------------------------------

def _label_vocabulary(kb: KnowledgeBase) -> set[str]:
    vocab: set[str] = set()
    for key in kb.label_index:
        vocab.update(key.split(" "))
    return vocab


def _sentence_bounds(text: str, abbreviations: frozenset[str]) -> list[Span]:
    return [s.span for s in split_sentences(text, abbreviations)]


def score_candidates(candidates: list[Candidate], store: IndexStore,
                     kb: KnowledgeBase, lexicon: Lexicon,
                     patterns: dict[str, re.Pattern] | None = None) -> None:
    """Fill each candidate's breakdown and score, in place.

    ``avg_tfidf`` is normalized across this batch, so scores are comparable
    within one extraction run.
    """
    patterns = patterns or {}
    vocab = _label_vocabulary(kb)
    sentence_cache: dict[str, list[Span]] = {}
    assoc_cache: dict[str, list[Span]] = {}

    def doc_sentences(doc_id: str) -> list[Span]:
        if doc_id not in sentence_cache:
            text = store.documents[doc_id].text
            sentence_cache[doc_id] = _sentence_bounds(text, lexicon.abbreviations)
        return sentence_cache[doc_id]

    def doc_associations(doc_id: str) -> list[Span]:
        if doc_id not in assoc_cache:
            spans: list[Span] = []
            for entity_docs in store.associations.values():
                spans.extend(entity_docs.get(doc_id, ()))
            assoc_cache[doc_id] = spans
        return assoc_cache[doc_id]

    raw_tfidf: dict[str, float] = {}
    for cand in candidates:
        doc_means = []
        for doc_id in cand.doc_ids:
            if not store.has_document(doc_id):
                continue
            values = [tf_idf(store, lemma, doc_id) for lemma in cand.lemmas]
            doc_means.append(sum(values) / len(values))
        raw_tfidf[cand.id] = sum(doc_means) / len(doc_means) if doc_means else 0.0

    values = list(raw_tfidf.values())
    lo, hi = (min(values), max(values)) if values else (0.0, 0.0)
    spread = hi - lo

    for cand in candidates:
        b = ScoreBreakdown()
        b.components["avg_tfidf"] = (
            (raw_tfidf[cand.id] - lo) / spread if spread > 0 else
            (1.0 if raw_tfidf[cand.id] > 0 else 0.0))
        b.components["dictionary"] = 1.0 if cand.head in lexicon else 0.0
        b.components["thesaurus"] = 1.0 if any(l in vocab for l in cand.lemmas) else 0.0
        b.components["regex"] = 1.0 if any(
            p.fullmatch(lemma) for p in patterns.values() for lemma in cand.lemmas) else 0.0

        entry = lexicon.entries.get(cand.head)
        synonyms = set(entry.synonyms) if entry else set()
        b.components["synonym"] = 1.0 if any(
            s in kb.label_index for s in synonyms) else 0.0

        suffix_hit = any(" ".join(cand.lemmas[i:]) in kb.label_index
                         for i in range(1, len(cand.lemmas)))
        b.components["subclass"] = 1.0 if suffix_hit else 0.0

        docs_known = [d for d in cand.doc_ids
                      if store.has_document(d) and doc_associations(d)]
        b.components["cooccurrence"] = (
            len(docs_known) / len(cand.doc_ids) if cand.doc_ids else 0.0)

        proximity = 0.0
        for doc_id, span in cand.occurrences:
            if not store.has_document(doc_id):
                continue
            bounds = doc_sentences(doc_id)
            sentence = next(((s, e) for s, e in bounds
                             if s <= span[0] and span[1] <= e), None)
            if sentence is None:
                continue
            if any(sentence[0] <= a_start and a_end <= sentence[1]
                   for a_start, a_end in doc_associations(doc_id)):
                proximity = 1.0
                break
        b.components["proximity"] = proximity

        df_fraction = (store.df(cand.head) / store.n_docs) if store.n_docs else 0.0
        b.penalty = COMMON_WORD_PENALTY if df_fraction >= COMMON_WORD_DOC_FRACTION else 1.0
        b.recompute()
        cand.breakdown = b
        cand.score = b.score
    candidates.sort(key=lambda c: (-c.score, c.id))


# -- parent suggestion ----------------------------------------------------

def _resolve_parent(kb: KnowledgeBase, key: str) -> tuple[str, bool]:
    entities = kb.label_index.get(key, set())
    if entities:
        classes = sorted(e for e in entities if kb.is_class(e))
        return (classes[0] if classes else sorted(entities)[0]), True
    return key, False


def _lemma_seq(text: str, lexicon: Lexicon) -> list[tuple[str, Span]]:
    tokens = [t for t in pos_tag(tokenize(text), lexicon) if t.kind == "word"]
    out = []
    for t in tokens:
        out.append((lemmatize(t, lexicon), t.span))
    return out


def suggest_parents(candidate: Candidate, store: IndexStore, kb: KnowledgeBase,
                    lexicon: Lexicon) -> list[ParentSuggestion]:
    """Propose broader terms via lexico-syntactic patterns and the lexicon.

    Pattern detectors look at the sentences the candidate occurs in:
    "P such as C", "C and other P", "P including C".  The head-noun detector
    proposes the phrase head when it is already a known label, and the
    dictionary detector proposes lexicon hypernyms of the head.
    """
    suggestions: list[ParentSuggestion] = []
    seen: set[tuple[str, str]] = set()

    def add(parent_key: str, detector: str, evidence: str) -> None:
        parent, resolved = _resolve_parent(kb, parent_key)
        key = (parent, detector)
        if key not in seen:
            seen.add(key)
            suggestions.append(ParentSuggestion(parent, detector, evidence, resolved))

    for doc_id, span in candidate.occurrences:
        if not store.has_document(doc_id):
            continue
        text = store.documents[doc_id].text
        bounds = _sentence_bounds(text, lexicon.abbreviations)
        sentence_span = next(((s, e) for s, e in bounds
                              if s <= span[0] and span[1] <= e), None)
        if sentence_span is None:
            continue
        sentence = text[sentence_span[0]:sentence_span[1]]
        words = [l for l, _ in _lemma_seq(sentence, lexicon)]
        pos = _find_subsequence(words, list(candidate.lemmas))
        if pos is None:
            continue
        end = pos + len(candidate.lemmas)

        # "P such as C": parent phrase right before "such as", candidate after
        for i in range(0, pos - 1):
            if words[i] == "such" and i + 1 < len(words) and words[i + 1] == "as":
                parent = _phrase_before(words, i, lexicon)
                if parent:
                    add(" ".join(parent), "hearst:such_as", sentence)
                break

        # "C and other P": parent phrase right after "and other"
        if end + 1 < len(words) and words[end] in ("and", "or") and words[end + 1] == "other":
            parent = _phrase_after(words, end + 2, lexicon)
            if parent:
                add(" ".join(parent), "hearst:and_other", sentence)

        # "P including C": parent phrase right before "including"
        for i in range(0, pos):
            if words[i] == "including":
                parent = _phrase_before(words, i, lexicon)
                if parent:
                    add(" ".join(parent), "hearst:including", sentence)
                break

    if len(candidate.lemmas) > 1 and candidate.head in kb.label_index:
        add(candidate.head, "head_noun", candidate.surface)

    entry = lexicon.entries.get(candidate.head)
    if entry:
        for hypernym in entry.hypernyms:
            add(hypernym, "dictionary", f"{candidate.head} < {hypernym}")

    candidate.parents = suggestions
    return suggestions


def _find_subsequence(haystack: list[str], needle: list[str]) -> int | None:
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i:i + len(needle)] == needle:
            return i
    return None


def _phrase_before(words: list[str], idx: int, lexicon: Lexicon) -> list[str]:
    """Content words immediately before position idx (longest useful run)."""
    out: list[str] = []
    j = idx - 1
    while j >= 0 and len(out) < MAX_CANDIDATE_TOKENS and \
            words[j] not in lexicon.stopwords and words[j].isalpha():
        out.insert(0, words[j])
        j -= 1
    return out


def _phrase_after(words: list[str], idx: int, lexicon: Lexicon) -> list[str]:
    out: list[str] = []
    j = idx
    while j < len(words) and len(out) < MAX_CANDIDATE_TOKENS and \
            words[j] not in lexicon.stopwords and words[j].isalpha():
        out.append(words[j])
        j += 1
    return out


# -- workflow -------------------------------------------------------------

def check_transition(current: str, target: str) -> None:
    if current not in TRANSITIONS:
        raise IllegalTransition(f"unknown state {current!r}")
    if target not in TRANSITIONS:
        raise IllegalTransition(f"unknown state {target!r}")
    if target not in TRANSITIONS[current]:
        raise IllegalTransition(f"cannot move candidate from {current!r} to {target!r}")


class CandidateStore:
    """Candidate collection with a state-change journal.

    ``snapshot_path`` holds the full JSON state; the journal lives next to it
    as append-only JSONL.  ``notify`` (if given) is called with each event —
    that is the hook the review UI's activity feed consumes.
    """

    def __init__(self, snapshot_path: str | Path | None = None,
                 notify: Callable[[dict], None] | None = None,
                 clock: Callable[[], str] | None = None):
        self.candidates: dict[str, Candidate] = {}
        self.snapshot_path = Path(snapshot_path) if snapshot_path else None
        self.notify = notify
        self.clock = clock or (lambda: datetime.now(timezone.utc)
                               .isoformat(timespec="seconds"))

    @property
    def journal_path(self) -> Path | None:
        if self.snapshot_path is None:
            return None
        return self.snapshot_path.with_suffix(".journal.jsonl")

    def _emit(self, event: dict) -> None:
        event = {"at": self.clock(), **event}
        if self.journal_path is not None:
            try:
                with self.journal_path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(event, ensure_ascii=False) + "\n")
            except OSError as exc:
                raise IoFailure(f"cannot append journal: {exc}") from exc
        if self.notify is not None:
            self.notify(event)

    def add_candidates(self, candidates: list[Candidate]) -> list[str]:
        """Merge freshly extracted candidates; existing ones keep their state
        but refresh statistics.  Returns the ids that are genuinely new."""
        new_ids = []
        for cand in candidates:
            existing = self.candidates.get(cand.id)
            if existing is None:
                self.candidates[cand.id] = cand
                new_ids.append(cand.id)
            else:
                cand.state = existing.state
                self.candidates[cand.id] = cand
        if new_ids:
            self._emit({"event": "candidates_generated", "count": len(new_ids),
                        "ids": new_ids})
        return new_ids

    def get(self, candidate_id_: str) -> Candidate:
        if candidate_id_ not in self.candidates:
            raise UnknownCandidate(f"unknown candidate {candidate_id_!r}")
        return self.candidates[candidate_id_]

    def set_state(self, candidate_id_: str, target: str, note: str = "") -> Candidate:
        cand = self.get(candidate_id_)
        check_transition(cand.state, target)
        previous = cand.state
        cand.state = target
        self._emit({"event": "state_changed", "candidate": cand.id,
                    "from": previous, "to": target, "note": note})
        return cand

    def list(self, state: str | None = None) -> list[Candidate]:
        cands = [c for c in self.candidates.values()
                 if state is None or c.state == state]
        return sorted(cands, key=lambda c: (-c.score, c.id))

    # -- persistence -----------------------------------------------------

    def save(self) -> None:
        if self.snapshot_path is None:
            raise IoFailure("candidate store has no snapshot path")
        payload = {"candidates": [c.to_dict() for c in
                                  sorted(self.candidates.values(), key=lambda c: c.id)]}
        try:
            self.snapshot_path.parent.mkdir(parents=True, exist_ok=True)
            tmp = self.snapshot_path.with_name(self.snapshot_path.name + ".tmp")
            tmp.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n",
                           encoding="utf-8")
            tmp.replace(self.snapshot_path)
        except OSError as exc:
            raise IoFailure(f"cannot write candidate store: {exc}") from exc

    def load(self) -> None:
        if self.snapshot_path is None or not self.snapshot_path.exists():
            return
        try:
            payload = json.loads(self.snapshot_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise IoFailure(f"cannot read candidate store: {exc}") from exc
        self.candidates = {c["id"]: Candidate.from_dict(c)
                           for c in payload.get("candidates", [])}

    # -- export ----------------------------------------------------------

    def export_accepted(self) -> dict:
        """Accepted candidates as thesaurus-shaped suggestions."""
        suggestions = []
        for cand in sorted(self.candidates.values(), key=lambda c: c.id):
            if cand.state != "accepted":
                continue
            suggestions.append({
                "candidate_id": cand.id,
                "pref_label": {"en": cand.surface},
                "lemmas": list(cand.lemmas),
                "score": cand.score,
                "frequency": cand.frequency,
                "documents": list(cand.doc_ids),
                "suggested_broader": [p.to_dict() for p in cand.parents],
            })
        return {"suggestions": suggestions}
