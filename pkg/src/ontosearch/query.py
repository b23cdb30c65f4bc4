"""Boolean query language: AST, parser, and round-trip printer.

Grammar (OR binds loosest; adjacent terms are an implicit AND)::

    query  := or
    or     := and ("OR" and)*
    and    := unary (("AND")? unary)*
    unary  := "NOT" unary | "(" query ")" | "concept:" ID | QUOTED | WORD

Operators are the literal uppercase words ``AND``/``OR``/``NOT``; their
lowercase forms are ordinary search words.  Keywords are normalized at parse
time: words are lemmatized and stopword lemmas are dropped (kept only when a
keyword would otherwise become empty), so "Chronic Diseases" and "chronic
disease" parse to the same node.  ``print_query`` emits a fully parenthesized
form that parses back to an equal AST.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import QuerySyntaxError
from .nlp import Lexicon, lemmatize, pos_tag, tokenize

QueryNode = Union["Keyword", "ConceptRef", "Not", "And", "Or"]


@dataclass(frozen=True)
class Keyword:
    """Free-text term: one or more lemmas that must all occur in a document."""
    lemmas: tuple[str, ...]


@dataclass(frozen=True)
class ConceptRef:
    """Reference to a knowledge entity (ontology class or thesaurus concept)."""
    entity_id: str


@dataclass(frozen=True)
class Not:
    child: QueryNode


@dataclass(frozen=True)
class And:
    children: tuple[QueryNode, ...]


@dataclass(frozen=True)
class Or:
    children: tuple[QueryNode, ...]


_CONCEPT_ID = re.compile(r"[A-Za-z0-9_.-]+")
_BARE_WORD = re.compile(r'[^\s()"]+')


@dataclass(frozen=True)
class _Tok:
    kind: str  # lparen rparen and or not concept quoted word end
    value: str
    pos: int


def _scan(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            tokens.append(_Tok("lparen", "(", i))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Tok("rparen", ")", i))
            i += 1
            continue
        if ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise QuerySyntaxError("unterminated quote", position=i)
            tokens.append(_Tok("quoted", text[i + 1:end], i))
            i = end + 1
            continue
        match = _BARE_WORD.match(text, i)
        word = match.group()
        if word == "AND":
            tokens.append(_Tok("and", word, i))
        elif word == "OR":
            tokens.append(_Tok("or", word, i))
        elif word == "NOT":
            tokens.append(_Tok("not", word, i))
        elif word.startswith("concept:"):
            entity_id = word[len("concept:"):]
            if not entity_id or not _CONCEPT_ID.fullmatch(entity_id):
                raise QuerySyntaxError(
                    f"bad concept reference {word!r}", position=i)
            tokens.append(_Tok("concept", entity_id, i))
        else:
            tokens.append(_Tok("word", word, i))
        i = match.end()
    tokens.append(_Tok("end", "", n))
    return tokens


def keyword_lemmas(text: str, lexicon: Lexicon) -> tuple[str, ...]:
    """Lemma sequence for keyword text, with stopword lemmas dropped.

    If every lemma is a stopword the full sequence is kept, so an explicit
    stopword query still means something.
    """
    tokens = [t for t in pos_tag(tokenize(text), lexicon) if t.kind == "word"]
    lemmas = tuple(lemmatize(t, lexicon) for t in tokens)
    content = tuple(l for l in lemmas if l not in lexicon.stopwords)
    return content or lemmas


class _Parser:
    def __init__(self, tokens: list[_Tok], lexicon: Lexicon):
        self.tokens = tokens
        self.lexicon = lexicon
        self.i = 0

    def peek(self) -> _Tok:
        return self.tokens[self.i]

    def take(self) -> _Tok:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> QueryNode:
        if self.peek().kind == "end":
            raise QuerySyntaxError("empty query", position=self.peek().pos)
        node = self.parse_or()
        trailing = self.peek()
        if trailing.kind != "end":
            raise QuerySyntaxError(
                f"unexpected {trailing.value!r}", position=trailing.pos)
        return node

    def parse_or(self) -> QueryNode:
        parts = [self.parse_and()]
        while self.peek().kind == "or":
            self.take()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> QueryNode:
        parts = [self.parse_unary()]
        while True:
            tok = self.peek()
            if tok.kind == "and":
                self.take()
                parts.append(self.parse_unary())
            elif tok.kind in ("not", "lparen", "concept", "quoted", "word"):
                parts.append(self.parse_unary())
            else:
                break
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_unary(self) -> QueryNode:
        tok = self.take()
        if tok.kind == "not":
            return Not(self.parse_unary())
        if tok.kind == "lparen":
            if self.peek().kind == "rparen":
                raise QuerySyntaxError("empty group", position=self.peek().pos)
            node = self.parse_or()
            closing = self.take()
            if closing.kind != "rparen":
                raise QuerySyntaxError("expected ')'", position=closing.pos)
            return node
        if tok.kind == "concept":
            return ConceptRef(tok.value)
        if tok.kind == "quoted":
            return Keyword(keyword_lemmas(tok.value, self.lexicon))
        if tok.kind == "word":
            return Keyword(keyword_lemmas(tok.value, self.lexicon))
        raise QuerySyntaxError(
            f"unexpected {'end of query' if tok.kind == 'end' else repr(tok.value)}",
            position=tok.pos)


def parse_query(text: str, lexicon: Lexicon) -> QueryNode:
    """Parse query text; raises QuerySyntaxError (with `.position`) on bad input."""
    return _Parser(_scan(text), lexicon).parse()


def print_query(node: QueryNode) -> str:
    """Canonical fully parenthesized text; ``parse(print(q))`` equals ``q``."""
    if isinstance(node, Keyword):
        body = " ".join(node.lemmas)
        if len(node.lemmas) == 1 and _BARE_WORD.fullmatch(body) and \
                not body.startswith("concept:") and body not in ("AND", "OR", "NOT"):
            return body
        return f'"{body}"'
    if isinstance(node, ConceptRef):
        return f"concept:{node.entity_id}"
    if isinstance(node, Not):
        return f"NOT {print_query(node.child)}"
    if isinstance(node, And):
        return "(" + " AND ".join(print_query(c) for c in node.children) + ")"
    if isinstance(node, Or):
        return "(" + " OR ".join(print_query(c) for c in node.children) + ")"
    raise TypeError(f"not a query node: {node!r}")


def query_concepts(node: QueryNode) -> set[str]:
    """All entity ids referenced anywhere in the query."""
    if isinstance(node, ConceptRef):
        return {node.entity_id}
    if isinstance(node, Not):
        return query_concepts(node.child)
    if isinstance(node, (And, Or)):
        out: set[str] = set()
        for child in node.children:
            out |= query_concepts(child)
        return out
    return set()
