"""Entity matchers: regex patterns, lexicon dictionary, knowledge-base labels.

All matchers take tokens that already carry POS tags and lemmas and return
:class:`MatchAnnotation` spans over the original text.  The thesaurus matcher
walks left to right taking the longest label match first (up to five tokens),
so "chronic obstructive pulmonary disease" wins over a shorter match on
"disease" starting inside it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

from ..errors import InvalidPattern
from .analyze import Token
from .lexicon import Lexicon

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, types only
    from ..knowledge import KnowledgeBase

MATCHER_KINDS = ("regex", "dictionary", "thesaurus", "ontology")

# longest label length, in word tokens, the thesaurus matcher will try
MAX_LABEL_TOKENS = 5


@dataclass(frozen=True)
class MatchAnnotation:
    span: tuple[int, int]
    matcher: str  # one of MATCHER_KINDS
    target: str   # pattern name, lexicon lemma, or knowledge entity id


def load_patterns(path: str | Path) -> dict[str, re.Pattern]:
    """Read ``name=regex`` lines (# comments and blanks ignored)."""
    patterns: dict[str, re.Pattern] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, expr = line.partition("=")
        name = name.strip()
        if not sep or not name or not expr.strip():
            raise InvalidPattern(f"line {lineno}: expected name=regex, got {line!r}")
        if name in patterns:
            raise InvalidPattern(f"line {lineno}: duplicate pattern name {name!r}")
        try:
            patterns[name] = re.compile(expr.strip())
        except re.error as exc:
            raise InvalidPattern(f"line {lineno}: bad regex for {name!r}: {exc}") from exc
    return patterns


def _match_text(token: Token) -> str:
    return token.lemma if token.lemma is not None else token.surface.lower()


def match_regex(tokens: list[Token],
                patterns: dict[str, re.Pattern]) -> list[MatchAnnotation]:
    """One annotation per (token, pattern) whose regex fully matches the token."""
    out: list[MatchAnnotation] = []
    names = sorted(patterns)
    for token in tokens:
        if token.kind not in ("word", "number"):
            continue
        text = _match_text(token)
        for name in names:
            if patterns[name].fullmatch(text):
                out.append(MatchAnnotation(token.span, "regex", name))
    return out


def match_dictionary(tokens: list[Token], lexicon: Lexicon) -> list[MatchAnnotation]:
    """Annotate word tokens whose lemma has a lexicon entry."""
    out: list[MatchAnnotation] = []
    for token in tokens:
        if token.kind != "word":
            continue
        lemma = _match_text(token)
        if lemma in lexicon:
            out.append(MatchAnnotation(token.span, "dictionary", lemma))
    return out


def match_thesaurus(tokens: list[Token], kb: "KnowledgeBase") -> list[MatchAnnotation]:
    """Longest-match knowledge-base labels over token n-grams.

    Runs of adjacent word/number tokens are scanned left to right; at each
    position the longest n-gram (n <= MAX_LABEL_TOKENS) whose lemma or
    lowercased surface form is a known label wins, and scanning resumes after
    it.  Class matches are tagged "ontology", concept matches "thesaurus".
    """
    out: list[MatchAnnotation] = []
    runs: list[list[Token]] = []
    current: list[Token] = []
    for token in tokens:
        if token.kind in ("word", "number"):
            current.append(token)
        elif current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)

    for run in runs:
        i = 0
        while i < len(run):
            matched = 0
            for n in range(min(MAX_LABEL_TOKENS, len(run) - i), 0, -1):
                window = run[i:i + n]
                keys = {" ".join(_match_text(t) for t in window),
                        " ".join(t.surface.lower() for t in window)}
                entities: set[str] = set()
                for key in keys:
                    entities |= kb.label_index.get(key, set())
                if entities:
                    span = (window[0].span[0], window[-1].span[1])
                    for entity_id in sorted(entities):
                        kind = "ontology" if kb.is_class(entity_id) else "thesaurus"
                        out.append(MatchAnnotation(span, kind, entity_id))
                    matched = n
                    break
            i += matched or 1
    return out
