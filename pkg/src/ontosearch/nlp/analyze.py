"""Core linguistic analysis: sentences, tokens, POS tags, lemmas, NP chunks."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .lexicon import Lexicon

POS_TAGS = ("NN", "NNS", "NNP", "JJ", "VB", "VBD", "VBG", "VBZ",
            "RB", "IN", "DT", "CC", "CD", "PUNCT", "OTHER")

# preference order when lexicon frequencies tie
_POS_ORDER = {tag: i for i, tag in enumerate(POS_TAGS)}

_NOUN_TAGS = {"NN", "NNS", "NNP"}
_VERB_TAGS = {"VB", "VBD", "VBG", "VBZ"}

_SYMBOL_CHARS = set("%$€£¥+=<>|/\\&#@^~*°§µ©®™")


@dataclass
class Token:
    span: tuple[int, int]
    surface: str
    kind: str  # word | number | punctuation | symbol
    pos: str | None = None
    lemma: str | None = None


@dataclass
class Sentence:
    span: tuple[int, int]
    token_range: tuple[int, int] | None = None  # filled by the pipeline


@dataclass
class Chunk:
    span: tuple[int, int]
    token_range: tuple[int, int]
    head_index: int
    lemma_seq: list[str] = field(default_factory=list)


_WORD = r"[^\W\d_](?:[^\W\d_]|\d)*(?:-(?:[^\W\d_]|\d)+)*"
_NUMBER = r"\d+(?:\.\d+)?"
_TOKEN_RE = re.compile(rf"(?P<word>{_WORD})|(?P<number>{_NUMBER})|(?P<other>\S)")

_SENT_PUNCT_RE = re.compile(r"[.!?]+")
_PARA_RE = re.compile(r"\n\n")
_LAST_WORD_RE = re.compile(r"(\S+)$")


def tokenize(text: str) -> list[Token]:
    """Split normalized text into word / number / punctuation / symbol tokens.

    Words may contain internal hyphens ("post-bronchodilator") and trailing
    digits ("FEV1"); numbers allow one decimal point; every other non-space
    character is its own token.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        if m.lastgroup == "word":
            kind = "word"
        elif m.lastgroup == "number":
            kind = "number"
        else:
            kind = "symbol" if m.group() in _SYMBOL_CHARS else "punctuation"
        tokens.append(Token(span=(m.start(), m.end()), surface=m.group(), kind=kind))
    return tokens


def split_sentences(text: str, abbreviations: frozenset[str] | set[str] = frozenset()) -> list[Sentence]:
    """Sentence segmentation over normalized text.

    A boundary is ``. ! ?`` followed by whitespace and an uppercase letter or
    digit, unless the preceding word is a known abbreviation; paragraph breaks
    always end a sentence. Sentences partition the non-whitespace text.
    """
    if not text.strip():
        return []
    breaks: set[int] = set()
    for m in _SENT_PUNCT_RE.finditer(text):
        end = m.end()
        rest = text[end:]
        stripped = rest.lstrip()
        if stripped is rest or not stripped:
            continue  # needs whitespace after the punctuation, and a next char
        nxt = stripped[0]
        if not (nxt.isupper() or nxt.isdigit()):
            continue
        if set(m.group()) == {"."}:
            before = _LAST_WORD_RE.search(text[:m.start()])
            if before:
                word = before.group(1).strip(".,;:!?()[]\"'").lower()
                if word in abbreviations:
                    continue
        breaks.add(end)
    for m in _PARA_RE.finditer(text):
        breaks.add(m.start())

    sentences = []
    start = 0
    for cut in sorted(breaks) + [len(text)]:
        segment = text[start:cut]
        lead = len(segment) - len(segment.lstrip())
        trail = len(segment) - len(segment.rstrip())
        if segment.strip():
            sentences.append(Sentence(span=(start + lead, cut - trail)))
        start = cut
    return sentences


def _top_pos(entry) -> str:
    items = sorted(entry.pos_frequencies.items(),
                   key=lambda kv: (-kv[1], _POS_ORDER.get(kv[0], 99)))
    return items[0][0] if items else "NN"


def _noun_stem_known(low: str, lexicon: Lexicon) -> bool:
    candidates = []
    if low.endswith("ies") and len(low) > 4:
        candidates.append(low[:-3] + "y")
    if low.endswith("es") and len(low) > 3:
        candidates.append(low[:-2])
    if low.endswith("s") and len(low) > 2:
        candidates.append(low[:-1])
    for cand in candidates:
        entry = lexicon.entries.get(cand)
        if entry and _top_pos(entry) in _NOUN_TAGS:
            return True
    return False


def pos_tag(tokens: list[Token], lexicon: Lexicon, text: str = "") -> list[Token]:
    """Fill ``pos`` in place: lexicon frequency vote, then suffix guesses.

    ``text`` (the source string) lets the tagger see paragraph breaks when
    deciding whether a capitalized token is sentence-internal; without it the
    decision falls back to preceding-punctuation only.
    """
    at_sentence_start = True
    prev_end = 0
    for tok in tokens:
        if text and "\n\n" in text[prev_end:tok.span[0]]:
            at_sentence_start = True
        if tok.kind == "number":
            tok.pos = "CD"
        elif tok.kind == "punctuation":
            tok.pos = "PUNCT"
        elif tok.kind == "symbol":
            tok.pos = "OTHER"
        else:
            low = tok.surface.lower()
            entry = lexicon.entries.get(low)
            if entry and entry.pos_frequencies:
                tok.pos = _top_pos(entry)
            elif low.endswith("ing") and len(low) > 4:
                tok.pos = "VBG"
            elif low.endswith("ed") and len(low) > 3:
                tok.pos = "VBD"
            elif low.endswith("ly") and len(low) > 3:
                tok.pos = "RB"
            elif low.endswith("s") and not low.endswith("ss") and _noun_stem_known(low, lexicon):
                tok.pos = "NNS"
            elif tok.surface[0].isupper() and not at_sentence_start:
                tok.pos = "NNP"
            else:
                tok.pos = "NN"
        if tok.kind == "punctuation" and set(tok.surface) & set(".!?"):
            at_sentence_start = True
        elif tok.kind in ("word", "number"):
            at_sentence_start = False
        prev_end = tok.span[1]
    return tokens


_UNDOUBLE = set("bdgmnprt")


def _strip_affix(stem: str, lexicon: Lexicon) -> str:
    """Resolve an -ing/-ed stem: lexicon first, then undo doubling, restore e."""
    if stem in lexicon.entries:
        return stem
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
        undoubled = stem[:-1]
        if undoubled in lexicon.entries:
            return undoubled
        if stem + "e" in lexicon.entries:
            return stem + "e"
        return undoubled
    if stem + "e" in lexicon.entries:
        return stem + "e"
    return stem


def lemmatize(token: Token, lexicon: Lexicon) -> str:
    """Lemma of one token given its POS tag; total, never empty for words."""
    low = token.surface.lower()
    if token.kind != "word":
        return low
    if low in lexicon.lemma_exceptions:
        return lexicon.lemma_exceptions[low]
    if low in lexicon.entries:
        return low
    pos = token.pos or ""
    if pos == "VBG" and low.endswith("ing") and len(low) > 4:
        return _strip_affix(low[:-3], lexicon)
    if pos == "VBD" and low.endswith("ied") and len(low) > 4:
        return low[:-3] + "y"
    if pos == "VBD" and low.endswith("ed") and len(low) > 3:
        return _strip_affix(low[:-2], lexicon)
    if low.endswith("ies") and len(low) > 4:
        return low[:-3] + "y"
    if (pos in _NOUN_TAGS or pos in _VERB_TAGS) and low.endswith("s") and len(low) > 3:
        if low.endswith(("ss", "us", "is")):
            return low
        if low[:-1] in lexicon.entries:
            return low[:-1]
        if low.endswith("es") and low[:-2] in lexicon.entries:
            return low[:-2]
        if low.endswith(("sses", "xes", "zes", "ches", "shes")):
            return low[:-2]
        return low[:-1]
    return low


_CHUNK_MODIFIERS = {"JJ", "NN", "NNS", "NNP", "VBG"}
_CHUNK_HEADS = {"NN", "NNS", "NNP"}


def chunk_noun_phrases(tokens: list[Token], sentences: list[Sentence],
                       stopwords: set[str] | frozenset[str] = frozenset()) -> list[Chunk]:
    """Maximal noun-phrase chunks: (JJ|NN|NNS|NNP|VBG)* (NN|NNS|NNP).

    Head is the last noun of the run; chunks never cross sentence boundaries;
    a one-token chunk whose lemma is a stopword is dropped.
    """
    chunks = []
    for sent in sentences:
        lo, hi = sent.token_range if sent.token_range else (0, len(tokens))
        i = lo
        while i < hi:
            if tokens[i].pos in _CHUNK_MODIFIERS:
                j = i
                while j < hi and tokens[j].pos in _CHUNK_MODIFIERS:
                    j += 1
                head = None
                for k in range(j - 1, i - 1, -1):
                    if tokens[k].pos in _CHUNK_HEADS:
                        head = k
                        break
                if head is not None:
                    lemmas = [tokens[k].lemma or tokens[k].surface.lower()
                              for k in range(i, head + 1)]
                    if not (head == i and lemmas[0] in stopwords):
                        chunks.append(Chunk(
                            span=(tokens[i].span[0], tokens[head].span[1]),
                            token_range=(i, head + 1),
                            head_index=head,
                            lemma_seq=lemmas,
                        ))
                i = j
            else:
                i += 1
    return chunks
