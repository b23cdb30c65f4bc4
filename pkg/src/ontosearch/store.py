"""Persistent index cache: document table, inverted index, concept associations.

The store is a plain in-memory structure with a canonical ``state()`` form;
two stores are equal iff their states are equal, which is what makes
"incremental updates match a full rebuild" checkable.  Snapshots are a
three-part text file::

    ONTOSEARCH-SNAPSHOT 1
    {...canonical JSON payload on one line...}
    SHA256 <hex digest of the payload line>

Unknown snapshot versions and checksum or payload damage are reported as
distinct errors so callers can tell "upgrade needed" from "file corrupt".
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    CorruptSnapshot,
    DuplicateDocument,
    IoFailure,
    UnknownDocument,
    VersionUnsupported,
)

SNAPSHOT_MAGIC = "ONTOSEARCH-SNAPSHOT"
SNAPSHOT_VERSION = 1

Span = tuple[int, int]


@dataclass
class DocEntry:
    """Per-document record kept by the store (metadata + cached text)."""

    id: str
    title: str = ""
    authors: list[str] = field(default_factory=list)
    date: str = ""
    language: str = "en"
    source: str = ""
    text: str = ""
    doc_length: int = 0  # number of indexed term occurrences

    def to_state(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "authors": list(self.authors),
            "date": self.date,
            "language": self.language,
            "source": self.source,
            "text": self.text,
            "doc_length": self.doc_length,
        }

    @classmethod
    def from_state(cls, state: dict) -> "DocEntry":
        return cls(id=state["id"], title=state.get("title", ""),
                   authors=list(state.get("authors", [])),
                   date=state.get("date", ""),
                   language=state.get("language", "en"),
                   source=state.get("source", ""),
                   text=state.get("text", ""),
                   doc_length=int(state.get("doc_length", 0)))


class IndexStore:
    """Inverted index + concept associations for one corpus snapshot."""

    def __init__(self, knowledge_fingerprint: str = ""):
        self.documents: dict[str, DocEntry] = {}
        self.postings: dict[str, dict[str, int]] = {}
        self.associations: dict[str, dict[str, list[Span]]] = {}
        self.knowledge_fingerprint = knowledge_fingerprint

    # -- updates ---------------------------------------------------------

    def put_document(self, entry: DocEntry, postings: dict[str, int],
                     associations: dict[str, list[Span]]) -> None:
        """Add one document's term counts and entity occurrences.

        ``doc_length`` is derived here as the total of the term counts, so it
        can never drift from the postings.
        """
        if entry.id in self.documents:
            raise DuplicateDocument(f"document already indexed: {entry.id!r}")
        entry.doc_length = sum(postings.values())
        self.documents[entry.id] = entry
        for term, count in postings.items():
            if count <= 0:
                continue
            self.postings.setdefault(term, {})[entry.id] = count
        for entity_id, spans in associations.items():
            if not spans:
                continue
            bucket = self.associations.setdefault(entity_id, {})
            bucket[entry.id] = sorted(tuple(s) for s in spans)

    def remove_document(self, doc_id: str) -> None:
        if doc_id not in self.documents:
            raise UnknownDocument(f"document not indexed: {doc_id!r}")
        del self.documents[doc_id]
        for term in list(self.postings):
            self.postings[term].pop(doc_id, None)
            if not self.postings[term]:
                del self.postings[term]
        for entity_id in list(self.associations):
            self.associations[entity_id].pop(doc_id, None)
            if not self.associations[entity_id]:
                del self.associations[entity_id]

    def clear(self) -> None:
        self.documents.clear()
        self.postings.clear()
        self.associations.clear()

    # -- lookups ---------------------------------------------------------

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    def has_document(self, doc_id: str) -> bool:
        return doc_id in self.documents

    def doc_length(self, doc_id: str) -> int:
        if doc_id not in self.documents:
            raise UnknownDocument(f"document not indexed: {doc_id!r}")
        return self.documents[doc_id].doc_length

    def term_count(self, term: str, doc_id: str) -> int:
        """Raw occurrence count of an indexed term in one document."""
        return self.postings.get(term, {}).get(doc_id, 0)

    def df(self, term: str) -> int:
        """Number of documents containing the term."""
        return len(self.postings.get(term, ()))

    def term_docs(self, term: str) -> dict[str, int]:
        return dict(self.postings.get(term, {}))

    def cdf(self, entity_id: str) -> int:
        """Number of documents associated with a knowledge entity."""
        return len(self.associations.get(entity_id, ()))

    def entity_docs(self, entity_id: str) -> dict[str, list[Span]]:
        return {doc: list(spans)
                for doc, spans in self.associations.get(entity_id, {}).items()}

    def occurrences(self, entity_id: str, doc_id: str) -> list[Span]:
        return list(self.associations.get(entity_id, {}).get(doc_id, []))

    def stats(self) -> dict:
        return {
            "documents": self.n_docs,
            "terms": len(self.postings),
            "postings": sum(len(d) for d in self.postings.values()),
            "entities": len(self.associations),
            "associations": sum(len(d) for d in self.associations.values()),
        }

    # -- canonical state and snapshots -----------------------------------

    def state(self) -> dict:
        return {
            "version": SNAPSHOT_VERSION,
            "knowledge_fingerprint": self.knowledge_fingerprint,
            "documents": {doc_id: entry.to_state()
                          for doc_id, entry in sorted(self.documents.items())},
            "postings": {term: dict(sorted(docs.items()))
                         for term, docs in sorted(self.postings.items())},
            "associations": {
                entity: {doc: [list(s) for s in spans]
                         for doc, spans in sorted(docs.items())}
                for entity, docs in sorted(self.associations.items())},
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexStore):
            return NotImplemented
        return self.state() == other.state()

    @classmethod
    def from_state(cls, state: dict) -> "IndexStore":
        store = cls(knowledge_fingerprint=state.get("knowledge_fingerprint", ""))
        for doc_id, doc_state in state.get("documents", {}).items():
            doc_state = dict(doc_state)
            doc_state.setdefault("id", doc_id)
            store.documents[doc_id] = DocEntry.from_state(doc_state)
        for term, docs in state.get("postings", {}).items():
            store.postings[term] = {doc: int(count) for doc, count in docs.items()}
        for entity, docs in state.get("associations", {}).items():
            store.associations[entity] = {
                doc: sorted((int(s), int(e)) for s, e in spans)
                for doc, spans in docs.items()}
        return store

    def save_snapshot(self, path: str | Path) -> None:
        payload = json.dumps(self.state(), sort_keys=True, ensure_ascii=False,
                             separators=(",", ":"))
        digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
        body = f"{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION}\n{payload}\nSHA256 {digest}\n"
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_text(body, encoding="utf-8")
            tmp.replace(path)
        except OSError as exc:
            raise IoFailure(f"cannot write snapshot {path}: {exc}") from exc

    @classmethod
    def load_snapshot(cls, path: str | Path) -> "IndexStore":
        path = Path(path)
        try:
            body = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read snapshot {path}: {exc}") from exc
        lines = body.splitlines()
        if len(lines) != 3 or not lines[0].startswith(SNAPSHOT_MAGIC + " "):
            raise CorruptSnapshot(f"{path}: not a snapshot file")
        try:
            version = int(lines[0].split(" ", 1)[1])
        except ValueError as exc:
            raise CorruptSnapshot(f"{path}: bad version line {lines[0]!r}") from exc
        if version != SNAPSHOT_VERSION:
            raise VersionUnsupported(
                f"{path}: snapshot version {version} not supported "
                f"(expected {SNAPSHOT_VERSION})")
        payload, checksum_line = lines[1], lines[2]
        if not checksum_line.startswith("SHA256 "):
            raise CorruptSnapshot(f"{path}: missing checksum line")
        expected = checksum_line.split(" ", 1)[1].strip()
        actual = hashlib.sha256(payload.encode("utf-8")).hexdigest()
        if actual != expected:
            raise CorruptSnapshot(f"{path}: checksum mismatch")
        try:
            state = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise CorruptSnapshot(f"{path}: payload is not valid JSON") from exc
        return cls.from_state(state)
