"""HTTP service over the engine facade.

Every response is JSON.  Domain errors map to structured bodies::

    {"error": {"code": "...", "message": "...", "detail": ...}}

with 400 for bad input (including query syntax errors, which carry the
offending position in ``detail``), 404 for unknown ids, 409 for conflicts
(duplicate documents, illegal workflow transitions), and 500 otherwise.
Mutating endpoints share one writer lock, so concurrent curation clicks and
reindex runs serialize instead of interleaving.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import Engine
from .errors import (
    DuplicateDocument,
    IllegalTransition,
    JudgmentsNotFound,
    OntosearchError,
    QuerySyntaxError,
    UnknownCandidate,
    UnknownClass,
    UnknownConcept,
    UnknownDocument,
    UnknownEntity,
)

_NOT_FOUND = (UnknownDocument, UnknownEntity, UnknownClass, UnknownConcept,
              UnknownCandidate, JudgmentsNotFound)
_CONFLICT = (DuplicateDocument, IllegalTransition)


def _status_for(exc: OntosearchError) -> int:
    if isinstance(exc, _NOT_FOUND):
        return 404
    if isinstance(exc, _CONFLICT):
        return 409
    return 400


class SearchBody(BaseModel):
    query: str
    include_related: bool = False
    limit: int | None = None


class TextSearchBody(BaseModel):
    text: str
    language: str = "en"
    include_related: bool = False
    limit: int | None = None


class MetadataBody(BaseModel):
    filters: dict[str, str]


class IndexBody(BaseModel):
    rebuild: bool = False


class StateBody(BaseModel):
    state: str
    note: str = ""


def create_app(engine: Engine, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ontosearch", version="1.0.0", docs_url=None, redoc_url=None)
    write_lock = threading.Lock()

    @app.exception_handler(OntosearchError)
    async def handle_domain_error(_request: Request, exc: OntosearchError):
        detail: Any = getattr(exc, "detail", None)
        if isinstance(exc, QuerySyntaxError):
            detail = {"position": exc.position}
        return JSONResponse(status_code=_status_for(exc),
                            content={"error": {"code": exc.code,
                                               "message": str(exc),
                                               "detail": detail}})

    @app.get("/api/stats")
    def stats():
        return engine.stats()

    @app.get("/api/tree")
    def tree():
        return engine.ontology_tree()

    @app.get("/api/suggest")
    def suggest(prefix: str, language: str = "en", limit: int = 10):
        return engine.suggest(prefix, language, limit)

    @app.get("/api/entities/{entity_id}")
    def entity(entity_id: str):
        return engine.entity_card(entity_id)

    @app.get("/api/documents")
    def documents():
        return engine.list_documents()

    @app.get("/api/documents/{doc_id}")
    def document(doc_id: str):
        return engine.document_card(doc_id)

    @app.post("/api/search")
    def search(body: SearchBody):
        return engine.search(body.query, body.include_related, body.limit)

    @app.post("/api/search/text")
    def search_text(body: TextSearchBody):
        return engine.search_text(body.text, body.language,
                                  body.include_related, body.limit)

    @app.post("/api/search/metadata")
    def search_metadata(body: MetadataBody):
        try:
            return engine.search_fields(body.filters)
        except ValueError as exc:
            return JSONResponse(status_code=400,
                                content={"error": {"code": "BadFilter",
                                                   "message": str(exc),
                                                   "detail": None}})

    @app.post("/api/index")
    def index(body: IndexBody):
        with write_lock:
            return engine.index_corpus(rebuild=body.rebuild)

    @app.post("/api/enrich")
    def enrich():
        with write_lock:
            return engine.run_enrichment()

    @app.get("/api/candidates")
    def candidates(state: str | None = None):
        return engine.list_candidates(state)

    @app.get("/api/candidates/{candidate_id}")
    def candidate(candidate_id: str):
        return engine.candidates.get(candidate_id).to_dict()

    @app.post("/api/candidates/{candidate_id}/state")
    def candidate_state(candidate_id: str, body: StateBody):
        with write_lock:
            return engine.set_candidate_state(candidate_id, body.state, body.note)

    @app.get("/api/suggestions/export")
    def suggestions_export():
        return engine.export_suggestions()

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


def serve(engine: Engine, host: str = "127.0.0.1", port: int = 8040,
          ui_dir: str | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(engine, ui_dir), host=host, port=port,
                log_level="warning")
