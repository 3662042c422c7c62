"""HTTP annotation service for the browser UI.

Serves DGA XML documents from a workspace directory as JSON, accepts
per-utterance annotation saves under optimistic revision locking, and
previews the metric suite over any document subset with numbers
identical to the batch pipeline. Documents persist as extended DGA XML;
the revision counter lives in memory for the lifetime of the service.

Endpoints:
    GET /docs                      document summaries
    GET /docs/{id}                 document + advisory flags + revision
    PUT /docs/{id}/utterances/{n}  save structures/decision (revision check)
    GET /metrics?docs=a,b          metric report over the union graph
    /                              static UI assets when configured
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .annotations import (
    AnnotatedDocument,
    AnnotatedUtterance,
    AnnotationDecision,
    DecisionStatus,
    DependencyArc,
    DgaParseError,
    DocumentValidationError,
    RejectReason,
    Structure,
    decision_to_dict,
    read_dga_xml,
    structure_to_dict,
    token_to_dict,
    validate,
    write_dga_xml,
)
from .criteria import DEFAULT_LEXICON, NonAcceptedLexicon, utterance_flags
from .graph import build_graph
from .metrics import DEFAULT_SMALLWORLD_TOL, compute_report, report_json_bytes

log = logging.getLogger(__name__)


class ArcIn(BaseModel):
    dep: int
    head: int


class StructureIn(BaseModel):
    members: list[int]
    arcs: list[ArcIn] = Field(default_factory=list)


class DecisionIn(BaseModel):
    status: str = "accepted"
    reason: str | None = None
    note: str = ""


class SaveIn(BaseModel):
    revision: int
    structures: list[StructureIn]
    decision: DecisionIn


@dataclass
class Session:
    """Per-document revision state; one accepted save bumps it by one."""

    doc_id: str
    revision: int = 0
    dirty: bool = False


class DocumentStore:
    """Workspace of DGA XML files with per-document write serialization."""

    def __init__(self, workspace: Path):
        self.workspace = Path(workspace)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, doc_id: str) -> Path:
        # Document ids are file stems; reject anything path-like.
        if "/" in doc_id or "\\" in doc_id or doc_id.startswith("."):
            raise HTTPException(status_code=404, detail=f"unknown document {doc_id!r}")
        return self.workspace / f"{doc_id}.xml"

    def lock_for(self, doc_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(doc_id, threading.Lock())

    def session_for(self, doc_id: str) -> Session:
        with self._registry_lock:
            return self._sessions.setdefault(doc_id, Session(doc_id=doc_id))

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.workspace.glob("*.xml"))

    def load(self, doc_id: str) -> AnnotatedDocument:
        path = self._path(doc_id)
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"unknown document {doc_id!r}")
        try:
            return read_dga_xml(path.read_bytes())
        except (DgaParseError, DocumentValidationError) as e:
            raise HTTPException(status_code=422, detail=f"unreadable document {doc_id!r}: {e}")

    def save(self, doc_id: str, doc: AnnotatedDocument) -> None:
        path = self._path(doc_id)
        tmp = path.with_suffix(".xml.tmp")
        tmp.write_bytes(write_dga_xml(doc))
        tmp.replace(path)


def _summary(store: DocumentStore, doc_id: str) -> dict:
    try:
        doc = store.load(doc_id)
    except HTTPException as e:
        return {"id": doc_id, "error": str(e.detail), "utterances": None, "annotated": None}
    decided = sum(
        1
        for u in doc.utterances
        if u.structures or u.decision.status is not DecisionStatus.ACCEPTED
    )
    return {
        "id": doc_id,
        "error": None,
        "utterances": len(doc.utterances),
        "annotated": decided,
        "revision": store.session_for(doc_id).revision,
    }


def _structures_from_payload(payload: SaveIn) -> tuple[Structure, ...]:
    return tuple(
        Structure(
            members=frozenset(s.members),
            arcs=frozenset(DependencyArc(dep=a.dep, head=a.head) for a in s.arcs),
        )
        for s in payload.structures
    )


def _decision_from_payload(payload: DecisionIn) -> AnnotationDecision:
    try:
        status = DecisionStatus(payload.status)
    except ValueError:
        raise HTTPException(status_code=422, detail=f"unknown status {payload.status!r}")
    reason = None
    if payload.reason:
        try:
            reason = RejectReason(payload.reason)
        except ValueError:
            raise HTTPException(status_code=422, detail=f"unknown reason {payload.reason!r}")
    return AnnotationDecision(status=status, reason=reason, note=payload.note or "")


def create_app(
    workspace: Path | str,
    ui_dir: Path | str | None = None,
    lexicon: NonAcceptedLexicon = DEFAULT_LEXICON,
    smallworld_tol: float = DEFAULT_SMALLWORLD_TOL,
    poisson_n: str = "gcc",
) -> FastAPI:
    """Build the service app over a workspace directory of DGA XML files."""
    store = DocumentStore(Path(workspace))
    app = FastAPI(title="syngraph annotation service", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.get("/docs")
    def list_documents() -> dict:
        return {"documents": [_summary(store, doc_id) for doc_id in store.list_ids()]}

    @app.get("/docs/{doc_id}")
    def get_document(doc_id: str) -> dict:
        doc = store.load(doc_id)
        session = store.session_for(doc_id)
        utterances = []
        for index, u in enumerate(doc.utterances, start=1):
            flags = utterance_flags(u.tokens, lexicon)
            utterances.append(
                {
                    "index": index,
                    "tokens": [
                        {**token_to_dict(t), "ordno": i}
                        for i, t in enumerate(u.tokens, start=1)
                    ],
                    "structures": [structure_to_dict(s) for s in u.structures],
                    "decision": decision_to_dict(u.decision),
                    "flags": [
                        {"kind": f.kind.value, "span": list(f.span), "suggestion": f.suggestion}
                        for f in flags
                    ],
                }
            )
        return {
            "id": doc_id,
            "corpus_id": doc.corpus_id,
            "revision": session.revision,
            "utterances": utterances,
        }

    @app.put("/docs/{doc_id}/utterances/{index}")
    def save_annotation(doc_id: str, index: int, payload: SaveIn):
        lock = store.lock_for(doc_id)
        with lock:
            doc = store.load(doc_id)
            session = store.session_for(doc_id)
            if payload.revision != session.revision:
                return JSONResponse(
                    status_code=409,
                    content={
                        "error": "stale revision",
                        "revision": session.revision,
                        "sent": payload.revision,
                    },
                )
            if index < 1 or index > len(doc.utterances):
                raise HTTPException(status_code=404, detail=f"no utterance {index}")
            utterance = replace(
                doc.utterances[index - 1],
                structures=_structures_from_payload(payload),
                decision=_decision_from_payload(payload.decision),
            )
            new_utterances = list(doc.utterances)
            new_utterances[index - 1] = utterance
            new_doc = replace(doc, utterances=tuple(new_utterances))
            violations = validate(new_doc)
            if violations:
                return JSONResponse(
                    status_code=422,
                    content={
                        "error": "validation failed",
                        "violations": [
                            {"utterance": v.utterance, "code": v.code, "detail": v.detail}
                            for v in violations
                        ],
                    },
                )
            store.save(doc_id, new_doc)
            session.revision += 1
            return {"revision": session.revision}

    @app.get("/metrics")
    def preview_metrics(docs: str | None = Query(default=None)) -> Response:
        ids = [x for x in (docs.split(",") if docs else store.list_ids()) if x]
        if not ids:
            raise HTTPException(status_code=404, detail="no documents selected")
        loaded = [store.load(doc_id) for doc_id in ids]
        graph = build_graph(loaded)
        corpus_id = "+".join(ids)
        report = compute_report(
            corpus_id,
            graph,
            loaded,
            smallworld_tol=smallworld_tol,
            poisson_n=poisson_n,
        )
        return Response(content=report_json_bytes(report), media_type="application/json")

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
