"""Bundled lexicon: POS frequencies, synonyms/hypernyms, exceptions, stopwords.

File formats:
* lexicon (``.jsonl``): one entry per line,
  ``{"lemma": ..., "pos_frequencies": {...}, "synonyms": [...], "hypernyms": [...]}``
* exceptions: ``surface<TAB>lemma`` per line
* stopwords / abbreviations: one entry per line; ``#`` starts a comment
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class LexiconEntry:
    pos_frequencies: dict[str, int] = field(default_factory=dict)
    synonyms: set[str] = field(default_factory=set)
    hypernyms: set[str] = field(default_factory=set)


@dataclass
class Lexicon:
    entries: dict[str, LexiconEntry] = field(default_factory=dict)
    lemma_exceptions: dict[str, str] = field(default_factory=dict)
    stopwords: set[str] = field(default_factory=set)
    abbreviations: set[str] = field(default_factory=set)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.entries

    @classmethod
    def empty(cls) -> "Lexicon":
        return cls()


def _read_lines(path: str | Path) -> list[str]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def load_lexicon(entries_file: str | Path,
                 exceptions_file: str | Path | None = None,
                 stopwords_file: str | Path | None = None,
                 abbreviations_file: str | Path | None = None) -> Lexicon:
    entries: dict[str, LexiconEntry] = {}
    for lineno, line in enumerate(Path(entries_file).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        record = json.loads(line)
        lemma = record["lemma"].lower()
        entries[lemma] = LexiconEntry(
            pos_frequencies={k: int(v) for k, v in record.get("pos_frequencies", {}).items()},
            synonyms={s.lower() for s in record.get("synonyms", [])},
            hypernyms={h.lower() for h in record.get("hypernyms", [])},
        )

    exceptions: dict[str, str] = {}
    if exceptions_file:
        for line in _read_lines(exceptions_file):
            surface, _, lemma = line.partition("\t")
            if not lemma:
                surface, _, lemma = line.partition(" ")
            exceptions[surface.strip().lower()] = lemma.strip().lower()

    stopwords = set()
    if stopwords_file:
        stopwords = {w.lower() for w in _read_lines(stopwords_file)}

    abbreviations = set()
    if abbreviations_file:
        abbreviations = {a.lower().rstrip(".") for a in _read_lines(abbreviations_file)}

    return Lexicon(entries=entries, lemma_exceptions=exceptions,
                   stopwords=stopwords, abbreviations=abbreviations)
