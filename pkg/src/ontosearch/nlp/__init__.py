"""Rule-based annotation pipeline: sentences, tokens, POS, lemmas, chunks, matchers."""

from .lexicon import Lexicon, LexiconEntry, load_lexicon
from .analyze import (
    POS_TAGS,
    Chunk,
    Sentence,
    Token,
    chunk_noun_phrases,
    lemmatize,
    pos_tag,
    split_sentences,
    tokenize,
)
from .matchers import (
    MatchAnnotation,
    load_patterns,
    match_dictionary,
    match_regex,
    match_thesaurus,
)
from .pipeline import AnnotatedDocument, PipelineConfig, run_pipeline

__all__ = [
    "AnnotatedDocument",
    "Chunk",
    "Lexicon",
    "LexiconEntry",
    "MatchAnnotation",
    "POS_TAGS",
    "PipelineConfig",
    "Sentence",
    "Token",
    "chunk_noun_phrases",
    "lemmatize",
    "load_lexicon",
    "load_patterns",
    "match_dictionary",
    "match_regex",
    "match_thesaurus",
    "pos_tag",
    "run_pipeline",
    "split_sentences",
    "tokenize",
]
