"""End-to-end text analysis: sentences, tokens, tags, lemmas, chunks, matches.

The pipeline is deterministic: the same document and configuration always
produce the same annotations, so index builds are reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from ..corpus import Document
from .analyze import (
    Chunk,
    Sentence,
    Token,
    chunk_noun_phrases,
    lemmatize,
    pos_tag,
    split_sentences,
    tokenize,
)
from .lexicon import Lexicon
from .matchers import MatchAnnotation, match_dictionary, match_regex, match_thesaurus

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, types only
    from ..knowledge import KnowledgeBase


@dataclass
class PipelineConfig:
    lexicon: Lexicon
    patterns: dict[str, re.Pattern] = field(default_factory=dict)
    kb: "KnowledgeBase | None" = None
    enable_regex: bool = True
    enable_dictionary: bool = True
    enable_thesaurus: bool = True


@dataclass
class AnnotatedDocument:
    doc: Document
    tokens: list[Token]
    sentences: list[Sentence]
    chunks: list[Chunk]
    matches: list[MatchAnnotation]


def run_pipeline(doc: Document, config: PipelineConfig) -> AnnotatedDocument:
    lexicon = config.lexicon
    text = doc.text

    sentences = split_sentences(text, lexicon.abbreviations)
    tokens = tokenize(text)
    pos_tag(tokens, lexicon, text)
    for token in tokens:
        token.lemma = lemmatize(token, lexicon)

    # attach each sentence's [first, last) token range
    idx = 0
    for sentence in sentences:
        start, end = sentence.span
        while idx < len(tokens) and tokens[idx].span[0] < start:
            idx += 1
        first = idx
        while idx < len(tokens) and tokens[idx].span[1] <= end:
            idx += 1
        sentence.token_range = (first, idx)

    chunks = chunk_noun_phrases(tokens, sentences, lexicon.stopwords)

    matches: list[MatchAnnotation] = []
    if config.enable_regex and config.patterns:
        matches.extend(match_regex(tokens, config.patterns))
    if config.enable_dictionary:
        matches.extend(match_dictionary(tokens, lexicon))
    if config.enable_thesaurus and config.kb is not None:
        matches.extend(match_thesaurus(tokens, config.kb))
    matches.sort(key=lambda m: (m.span, MATCH_ORDER[m.matcher], m.target))

    return AnnotatedDocument(doc=doc, tokens=tokens, sentences=sentences,
                             chunks=chunks, matches=matches)


MATCH_ORDER = {"regex": 0, "dictionary": 1, "thesaurus": 2, "ontology": 3}
