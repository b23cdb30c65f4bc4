"""Document ingestion: format conversion, text normalization, stable identities.

Corpus file formats (see README for the full description):

* record file (``*.txt``): a header of ``field: value`` lines (``id``, ``title``,
  ``authors``, ``date``, ``language``, ``source``), a blank line, then the body.
  ``authors`` is ``;``-separated.
* record stream (``*.jsonl``): one JSON object per line with the same field
  names plus ``text``.
"""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import date as date_type, datetime, timezone
from html.parser import HTMLParser
from pathlib import Path

from .errors import DirectoryNotFound, EmptyDocument, NoDocumentsFound, UnsupportedFormat

FORMATS = ("plain", "html", "structured")

HEADER_FIELDS = ("id", "title", "authors", "date", "language", "source")


@dataclass
class Document:
    id: str
    title: str = ""
    authors: list[str] = field(default_factory=list)
    date: str = ""
    language: str = "en"
    source: str = ""
    text: str = ""
    raw_format: str = "plain"
    decode_lossy: bool = False


@dataclass
class CorpusManifest:
    documents: list[str]
    ingested_at: str
    counts: dict[str, int]
    warnings: list[str] = field(default_factory=list)


@dataclass
class CorpusLoad:
    """Result of scanning a corpus directory: the manifest plus the documents."""

    manifest: CorpusManifest
    documents: list[Document]


_TAB_RE = re.compile(r"\t")
_PARA_SPLIT_RE = re.compile(r"\n\s*\n")
_WS_RUN_RE = re.compile(r"\s+")
_CONTROL_RE = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f\x7f​‌‍⁠﻿]")


def normalize_text(s: str) -> str:
    """Normalize raw text to the canonical plain-text form.

    NFC, line endings to LF, tabs to spaces, control characters dropped.
    Paragraphs are separated by exactly one blank line; inside a paragraph
    every whitespace run collapses to a single space. Idempotent.
    """
    s = unicodedata.normalize("NFC", s)
    s = s.replace("\r\n", "\n").replace("\r", "\n")
    s = _CONTROL_RE.sub("", s)
    s = _TAB_RE.sub(" ", s)
    paragraphs = []
    for para in _PARA_SPLIT_RE.split(s):
        para = _WS_RUN_RE.sub(" ", para).strip()
        if para:
            paragraphs.append(para)
    return "\n\n".join(paragraphs)


class _TextExtractor(HTMLParser):
    """Collects text content, skipping <script> and <style> subtrees."""

    _SKIP = {"script", "style"}
    _BLOCK = {"p", "div", "br", "li", "ul", "ol", "h1", "h2", "h3", "h4", "h5",
              "h6", "tr", "table", "section", "article", "header", "footer",
              "blockquote", "pre"}

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP:
            self._skip_depth += 1
        elif tag in self._BLOCK:
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth > 0:
            self._skip_depth -= 1
        elif tag in self._BLOCK:
            self.parts.append("\n")

    def handle_data(self, data):
        if self._skip_depth == 0:
            self.parts.append(data)


def strip_html(raw: str) -> str:
    """Drop tags and script/style content, decode entities, keep block breaks."""
    parser = _TextExtractor()
    parser.feed(raw)
    parser.close()
    return "".join(parser.parts)


def parse_record(raw: str) -> tuple[dict, str]:
    """Split a record file into (header fields, body).

    Raises ValueError for a header line without a colon or an unknown field.
    """
    head, sep, body = raw.partition("\n\n")
    if not sep:
        # header-only files have no body; treat the whole file as header
        head, body = raw, ""
    meta: dict = {}
    for lineno, line in enumerate(head.splitlines(), start=1):
        if not line.strip():
            continue
        key, colon, value = line.partition(":")
        key = key.strip().lower()
        if not colon or key not in HEADER_FIELDS:
            raise ValueError(f"malformed header at line {lineno}: {line.strip()!r}")
        value = value.strip()
        if key == "authors":
            meta[key] = [a.strip() for a in value.split(";") if a.strip()]
        else:
            meta[key] = value
    return meta, body


def _derive_id(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _validate_date(value: str) -> str:
    if value:
        date_type.fromisoformat(value)
    return value


def ingest_document(raw: bytes | str, format: str = "plain",
                    metadata: dict | None = None) -> Document:
    """Convert raw input into a normalized :class:`Document`.

    The id comes from ``metadata`` when present, otherwise it is a content
    hash of the normalized text, so re-ingesting identical input yields the
    identical document.
    """
    if format not in FORMATS:
        raise UnsupportedFormat(f"unsupported format: {format!r}")
    metadata = dict(metadata or {})
    lossy = False
    if isinstance(raw, bytes):
        try:
            decoded = raw.decode("utf-8")
        except UnicodeDecodeError:
            decoded = raw.decode("utf-8", errors="replace")
            lossy = True
    else:
        decoded = raw

    if format == "html":
        decoded = strip_html(decoded)
    elif format == "structured":
        try:
            header, body = parse_record(decoded)
        except ValueError as exc:
            raise UnsupportedFormat(f"bad structured record: {exc}") from exc
        for key, value in header.items():
            metadata.setdefault(key, value)
        decoded = body

    text = normalize_text(decoded)
    if not text:
        raise EmptyDocument("document has no content after normalization")

    doc_id = str(metadata.get("id") or "").strip() or _derive_id(text)
    authors = metadata.get("authors") or []
    if isinstance(authors, str):
        authors = [a.strip() for a in authors.split(";") if a.strip()]
    return Document(
        id=doc_id,
        title=str(metadata.get("title") or ""),
        authors=list(authors),
        date=_validate_date(str(metadata.get("date") or "")),
        language=str(metadata.get("language") or "en"),
        source=str(metadata.get("source") or ""),
        text=text,
        raw_format=format,
        decode_lossy=lossy,
    )


def _iter_record_stream(raw: str, name: str):
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        record = json.loads(line)
        if not isinstance(record, dict) or "text" not in record:
            raise ValueError(f"{name}:{lineno}: stream record needs a 'text' field")
        meta = {k: v for k, v in record.items() if k in HEADER_FIELDS}
        yield meta, record["text"]


def load_corpus_dir(path: str | Path) -> CorpusLoad:
    """Ingest every well-formed corpus file under ``path`` (non-recursive).

    Malformed files are reported in the manifest's warning list instead of
    aborting the scan; duplicate ids keep the first occurrence.
    """
    directory = Path(path)
    if not directory.is_dir():
        raise DirectoryNotFound(f"not a directory: {directory}")

    documents: list[Document] = []
    seen: set[str] = set()
    warnings: list[str] = []
    total_bytes = 0

    def _add(doc: Document, size: int, name: str):
        nonlocal total_bytes
        if doc.id in seen:
            warnings.append(f"{name}: duplicate document id {doc.id!r}, skipped")
            return
        seen.add(doc.id)
        documents.append(doc)
        total_bytes += size

    for file in sorted(directory.iterdir()):
        if not file.is_file():
            continue
        raw = file.read_bytes()
        try:
            if file.suffix == ".jsonl":
                for meta, text in _iter_record_stream(raw.decode("utf-8"), file.name):
                    doc = ingest_document(text, "plain", meta)
                    _add(doc, len(text.encode("utf-8")), file.name)
            elif file.suffix in (".txt", ".rec"):
                _add(ingest_document(raw, "structured", {}), len(raw), file.name)
            elif file.suffix in (".html", ".htm"):
                _add(ingest_document(raw, "html", {}), len(raw), file.name)
            # other extensions are ignored silently (e.g. README files)
        except (ValueError, UnsupportedFormat, EmptyDocument, UnicodeDecodeError) as exc:
            warnings.append(f"{file.name}: {exc}")

    if not documents:
        raise NoDocumentsFound(f"no corpus documents in {directory}", detail=warnings)

    manifest = CorpusManifest(
        documents=[d.id for d in documents],
        ingested_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        counts={"documents": len(documents), "bytes": total_bytes},
        warnings=warnings,
    )
    return CorpusLoad(manifest=manifest, documents=documents)


def write_record(doc: Document, path: str | Path) -> None:
    """Serialize a document back to the record file format."""
    lines = [f"id: {doc.id}"]
    if doc.title:
        lines.append(f"title: {doc.title}")
    if doc.authors:
        lines.append(f"authors: {'; '.join(doc.authors)}")
    if doc.date:
        lines.append(f"date: {doc.date}")
    lines.append(f"language: {doc.language}")
    if doc.source:
        lines.append(f"source: {doc.source}")
    Path(path).write_text("\n".join(lines) + "\n\n" + doc.text + "\n", encoding="utf-8")
