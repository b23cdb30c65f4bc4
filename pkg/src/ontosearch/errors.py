"""Exception hierarchy. Every error carries a stable machine-readable code."""

from __future__ import annotations


class OntosearchError(Exception):
    """Base class; ``code`` is the stable identifier used by the CLI and HTTP API."""

    code = "InternalError"

    def __init__(self, message: str, detail: object = None):
        super().__init__(message)
        self.message = message
        self.detail = detail


# --- corpus ---------------------------------------------------------------

class UnsupportedFormat(OntosearchError):
    code = "UnsupportedFormat"


class EmptyDocument(OntosearchError):
    code = "EmptyDocument"


class DirectoryNotFound(OntosearchError):
    code = "DirectoryNotFound"


class NoDocumentsFound(OntosearchError):
    code = "NoDocumentsFound"


# --- nlp ------------------------------------------------------------------

class InvalidPattern(OntosearchError):
    code = "InvalidPattern"


# --- knowledge ------------------------------------------------------------

class KnowledgeError(OntosearchError):
    code = "KnowledgeError"


class CycleDetected(KnowledgeError):
    code = "CycleDetected"


class DanglingReference(KnowledgeError):
    code = "DanglingReference"


class DuplicateId(KnowledgeError):
    code = "DuplicateId"


class MissingEnglishLabel(KnowledgeError):
    code = "MissingEnglishLabel"


class UnknownClass(KnowledgeError):
    code = "UnknownClass"


class UnknownConcept(KnowledgeError):
    code = "UnknownConcept"


class UnknownEntity(KnowledgeError):
    code = "UnknownEntity"


# --- cache / store --------------------------------------------------------

class DuplicateDocument(OntosearchError):
    code = "DuplicateDocument"


class UnknownDocument(OntosearchError):
    code = "UnknownDocument"


class IoFailure(OntosearchError):
    code = "IoFailure"


class VersionUnsupported(OntosearchError):
    code = "VersionUnsupported"


class CorruptSnapshot(OntosearchError):
    code = "CorruptSnapshot"


# --- search ---------------------------------------------------------------

class QuerySyntaxError(OntosearchError):
    """Raised on malformed query strings; ``position`` is a character offset."""

    code = "SyntaxError"

    def __init__(self, message: str, position: int):
        super().__init__(message, detail={"position": position})
        self.position = position


class UnsupportedLanguage(OntosearchError):
    code = "UnsupportedLanguage"


# --- enrichment -----------------------------------------------------------

class IllegalTransition(OntosearchError):
    code = "IllegalTransition"


class UnknownCandidate(OntosearchError):
    code = "UnknownCandidate"


# --- evaluation -----------------------------------------------------------

class InvalidBeta(OntosearchError):
    code = "InvalidBeta"


class MismatchedJudgments(OntosearchError):
    code = "MismatchedJudgments"


class JudgmentsNotFound(OntosearchError):
    code = "JudgmentsNotFound"
