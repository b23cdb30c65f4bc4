"""Retrieval evaluation: precision/recall, F-measure, judged query sets.

Edge cases get explicit flags instead of silent conventions: an empty
retrieved set yields precision 0 with ``empty_retrieved`` set, and an empty
relevant set yields recall 1 with ``empty_relevant`` set, so reports can
mark the numbers that are definitions rather than measurements.

The harness never runs queries itself — callers hand it a ``run_query``
callable — so the same machinery evaluates the conceptual engine, a plain
keyword baseline, or anything else that returns ranked document ids.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .errors import InvalidBeta, JudgmentsNotFound, MismatchedJudgments

QUERY_MODES = ("boolean", "freetext")


@dataclass(frozen=True)
class PrecisionRecall:
    precision: float
    recall: float
    empty_retrieved: bool = False
    empty_relevant: bool = False


def precision_recall(retrieved: set[str], relevant: set[str]) -> PrecisionRecall:
    hits = len(retrieved & relevant)
    empty_retrieved = not retrieved
    empty_relevant = not relevant
    precision = 0.0 if empty_retrieved else hits / len(retrieved)
    recall = 1.0 if empty_relevant else hits / len(relevant)
    return PrecisionRecall(precision, recall, empty_retrieved, empty_relevant)


def f_measure(precision: float, recall: float, beta: float = 1.0) -> float:
    if beta <= 0:
        raise InvalidBeta(f"beta must be positive, got {beta}")
    denominator = beta * beta * precision + recall
    if denominator == 0:
        return 0.0
    return (1 + beta * beta) * precision * recall / denominator


@dataclass
class JudgedQuery:
    id: str
    mode: str       # "boolean" | "freetext"
    language: str
    text: str
    relevant: set[str] = field(default_factory=set)
    judged: set[str] = field(default_factory=set)


def load_judgments(path: str | Path) -> dict[str, JudgedQuery]:
    """Read a judgments file.

    Format, tab separated: ``#query<TAB>id<TAB>mode<TAB>language<TAB>text``
    declares a query; ``id<TAB>doc<TAB>0|1`` judges one document for it.
    """
    path = Path(path)
    if not path.exists():
        raise JudgmentsNotFound(f"no judgments file at {path}")
    queries: dict[str, JudgedQuery] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("##"):
            continue
        cells = line.split("\t")
        if cells[0] == "#query":
            if len(cells) != 5:
                raise ValueError(f"{path}:{lineno}: bad query declaration")
            qid, mode, language, text = cells[1:]
            if mode not in QUERY_MODES:
                raise ValueError(f"{path}:{lineno}: unknown mode {mode!r}")
            queries[qid] = JudgedQuery(qid, mode, language, text)
        else:
            if len(cells) != 3 or cells[2] not in ("0", "1"):
                raise ValueError(f"{path}:{lineno}: bad judgment row")
            qid, doc_id, verdict = cells
            if qid not in queries:
                raise ValueError(f"{path}:{lineno}: judgment before query {qid!r}")
            queries[qid].judged.add(doc_id)
            if verdict == "1":
                queries[qid].relevant.add(doc_id)
    return queries


@dataclass
class QueryOutcome:
    query_id: str
    retrieved: list[str]
    measure: PrecisionRecall
    f_score: float

    def to_dict(self) -> dict:
        return {"query_id": self.query_id, "retrieved": list(self.retrieved),
                "precision": self.measure.precision, "recall": self.measure.recall,
                "empty_retrieved": self.measure.empty_retrieved,
                "empty_relevant": self.measure.empty_relevant,
                "f": self.f_score}


@dataclass
class EvalReport:
    outcomes: dict[str, QueryOutcome]
    beta: float
    macro_precision: float
    macro_recall: float
    macro_f: float

    def to_dict(self) -> dict:
        return {"beta": self.beta,
                "macro_precision": self.macro_precision,
                "macro_recall": self.macro_recall,
                "macro_f": self.macro_f,
                "queries": {qid: o.to_dict() for qid, o in sorted(self.outcomes.items())}}


RunQuery = Callable[[JudgedQuery], list[str]]


def evaluate(run_query: RunQuery, judgments: dict[str, JudgedQuery],
             beta: float = 1.0) -> EvalReport:
    if beta <= 0:
        raise InvalidBeta(f"beta must be positive, got {beta}")
    outcomes: dict[str, QueryOutcome] = {}
    for qid in sorted(judgments):
        query = judgments[qid]
        retrieved = list(run_query(query))
        measure = precision_recall(set(retrieved), set(query.relevant))
        outcomes[qid] = QueryOutcome(qid, retrieved, measure,
                                     f_measure(measure.precision, measure.recall, beta))
    n = len(outcomes)
    macro_p = sum(o.measure.precision for o in outcomes.values()) / n if n else 0.0
    macro_r = sum(o.measure.recall for o in outcomes.values()) / n if n else 0.0
    macro_f = sum(o.f_score for o in outcomes.values()) / n if n else 0.0
    return EvalReport(outcomes, beta, macro_p, macro_r, macro_f)


@dataclass
class Comparison:
    query_id: str
    f_a: float
    f_b: float

    @property
    def delta(self) -> float:
        return self.f_a - self.f_b


def compare(report_a: EvalReport, report_b: EvalReport) -> list[Comparison]:
    """Per-query F deltas between two runs over the same query set."""
    ids_a, ids_b = set(report_a.outcomes), set(report_b.outcomes)
    if ids_a != ids_b:
        raise MismatchedJudgments(
            f"query sets differ: only in first {sorted(ids_a - ids_b)}, "
            f"only in second {sorted(ids_b - ids_a)}")
    return [Comparison(qid, report_a.outcomes[qid].f_score,
                       report_b.outcomes[qid].f_score)
            for qid in sorted(ids_a)]


@dataclass(frozen=True)
class CurvePoint:
    query_id: str
    depth: int
    precision: float
    recall: float
    f_score: float


def truncation_curve(run_query: RunQuery, judgments: dict[str, JudgedQuery],
                     beta: float = 1.0) -> list[CurvePoint]:
    """Precision/recall/F at every truncation depth up to the number of
    relevant documents, per query — the data behind a quality-vs-depth plot."""
    if beta <= 0:
        raise InvalidBeta(f"beta must be positive, got {beta}")
    points: list[CurvePoint] = []
    for qid in sorted(judgments):
        query = judgments[qid]
        retrieved = list(run_query(query))
        for depth in range(1, max(1, len(query.relevant)) + 1):
            measure = precision_recall(set(retrieved[:depth]), set(query.relevant))
            points.append(CurvePoint(qid, depth, measure.precision, measure.recall,
                                     f_measure(measure.precision, measure.recall, beta)))
    return points


def write_curve_csv(points: list[CurvePoint], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["query_id", "depth", "precision", "recall", "f"])
        for p in points:
            writer.writerow([p.query_id, p.depth,
                             f"{p.precision:.6f}", f"{p.recall:.6f}", f"{p.f_score:.6f}"])
