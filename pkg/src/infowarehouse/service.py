"""HTTP JSON API over the archive, schemas, and retrieval.

The API is stateless about work context: clients send the (instance,
activity category) pair with each search. Sessions are bearer tokens minted
for an actor name (a login stub, no passwords). All mutations funnel
through one write lock, honoring the archive's single-writer contract;
the posting index is immutable and swapped atomically on reindex.

Error contract: every enumerated engine error surfaces as exactly one
HTTP status plus a machine-readable code in {"error": {"code", "message"}}.
Path lookups that miss return 404/not_found; unknown ids inside request
bodies return 422 with the engine's code.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone

from fastapi import Depends, FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from . import retrieval
from .archive import Archive
from .config import ServiceConfig
from .errors import ConflictError, InvalidInputError, NotFoundError, WarehouseError
from .retrieval import WorkContext, annotate_hits, contextual_search, search
from .schema import categorical_context, parse_schema, schema_to_dict


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def _status_for(exc: WarehouseError) -> int:
    if isinstance(exc, ConflictError):
        return 409
    # NotFoundError here means an id referenced in a request body; path
    # lookups are pre-checked and answered with 404/not_found directly.
    return 422


@dataclass
class Session:
    token: str
    actor: str
    created_at: str


class SessionRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    actor: str


class InstanceRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    schema_id: str
    schema_version: int
    title: str


class ActivityRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    category: str


class StatusPatch(BaseModel):
    model_config = ConfigDict(extra="forbid")
    status: str


class CaptureRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    activity: str
    category: str
    body: str
    ds_refs: list[str] = []
    rs_refs: list[str] = []
    attachments: list[str] = []
    override: bool = False


class LinkRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    to: str
    kind: str
    note: str | None = None


class ContextRef(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: str
    activity_category: str


class SearchRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    query: str
    k: int = 10
    context: ContextRef | None = None
    semantic: bool = False


class ReindexRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    admin: bool = False


def build_app(archive: Archive, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="infowarehouse", docs_url=None, redoc_url=None)
    app.state.archive = archive
    app.state.config = config
    app.state.sessions: dict[str, Session] = {}
    app.state.index = None
    app.state.write_lock = threading.Lock()
    app.state.index_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message)

    @app.exception_handler(WarehouseError)
    async def _engine_error(_request: Request, exc: WarehouseError):
        return _error_response(_status_for(exc), exc.code, exc.message)

    def current_session(request: Request) -> Session:
        header = request.headers.get("authorization", "")
        token = header.removeprefix("Bearer ").strip() if header.startswith("Bearer ") else ""
        session = app.state.sessions.get(token)
        if session is None:
            raise ApiError(401, "invalid_session", "missing or unknown session token")
        return session

    def _lookup(fn, *args):
        """Path-parameter lookup: a miss is a 404, not a body validation error."""
        try:
            return fn(*args)
        except NotFoundError as exc:
            raise ApiError(404, "not_found", exc.message) from exc

    def _current_index() -> retrieval.PostingsIndex:
        index = app.state.index
        if index is None:
            with app.state.index_lock:
                if app.state.index is None:
                    app.state.index = retrieval.build_index(
                        archive, stem=config.stem, drop_stopwords=config.drop_stopwords
                    )
                index = app.state.index
        return index

    # -- sessions ---------------------------------------------------------

    @app.post("/api/sessions", status_code=201)
    def create_session(body: SessionRequest):
        if not body.actor.strip():
            raise ApiError(422, "invalid_field", "actor must be non-empty")
        token = secrets.token_hex(16)
        session = Session(
            token=token,
            actor=body.actor,
            created_at=datetime.now(timezone.utc).isoformat(timespec="milliseconds"),
        )
        app.state.sessions[token] = session
        return {"token": session.token, "actor": session.actor, "created_at": session.created_at}

    # -- schemas ----------------------------------------------------------

    @app.post("/api/schemas", status_code=201)
    def add_schema(body: dict, session: Session = Depends(current_session)):
        import json as _json

        schema = parse_schema(_json.dumps(body))
        with app.state.write_lock:
            archive.add_schema(schema)
        return {"id": schema.id, "version": schema.version}

    @app.get("/api/schemas/{schema_id}/{version}")
    def get_schema(schema_id: str, version: int, session: Session = Depends(current_session)):
        schema = _lookup(archive.get_schema, schema_id, version)
        return schema_to_dict(schema)

    # -- lifecycle ---------------------------------------------------------

    @app.post("/api/instances", status_code=201)
    def begin_instance(body: InstanceRequest, session: Session = Depends(current_session)):
        with app.state.write_lock:
            instance = archive.begin_instance(body.schema_id, body.schema_version, body.title, session.actor)
        return instance.to_dict()

    @app.patch("/api/instances/{instance_id}")
    def patch_instance(instance_id: str, body: StatusPatch, session: Session = Depends(current_session)):
        _lookup(archive.instance, instance_id)
        if body.status != "closed":
            raise ApiError(422, "invalid_field", f"unsupported instance status {body.status!r}")
        with app.state.write_lock:
            instance = archive.close_instance(instance_id)
        return instance.to_dict()

    @app.post("/api/instances/{instance_id}/activities", status_code=201)
    def begin_activity(instance_id: str, body: ActivityRequest, session: Session = Depends(current_session)):
        _lookup(archive.instance, instance_id)
        with app.state.write_lock:
            activity = archive.begin_activity(instance_id, body.category)
        return activity.to_dict()

    @app.patch("/api/activities/{activity_id}")
    def patch_activity(activity_id: str, body: StatusPatch, session: Session = Depends(current_session)):
        _lookup(archive.activity, activity_id)
        if body.status != "ended":
            raise ApiError(422, "invalid_field", f"unsupported activity status {body.status!r}")
        with app.state.write_lock:
            activity = archive.end_activity(activity_id)
        return activity.to_dict()

    # -- capture and linking -----------------------------------------------

    @app.post("/api/instances/{instance_id}/elements", status_code=201)
    def capture(instance_id: str, body: CaptureRequest, session: Session = Depends(current_session)):
        _lookup(archive.instance, instance_id)
        with app.state.write_lock:
            element = archive.record_element(
                instance_id,
                body.activity,
                body.category,
                body.body,
                author=session.actor,
                ds_targets=body.ds_refs,
                rs_targets=body.rs_refs,
                attachments=body.attachments,
                override=body.override,
            )
        outgoing, _ = archive.edges_of(element.id)
        return {"element": element.to_dict(), "edges": [e.to_dict() for e in outgoing]}

    @app.post("/api/elements/{element_id}/links", status_code=201)
    def link(element_id: str, body: LinkRequest, session: Session = Depends(current_session)):
        _lookup(archive.element, element_id)
        with app.state.write_lock:
            edge = archive.link_elements(element_id, body.to, body.kind, body.note)
        return {"edge": edge.to_dict()}

    # -- context and graphs --------------------------------------------------

    @app.get("/api/elements/{element_id}/context")
    def element_context(element_id: str, depth: int = 1, session: Session = Depends(current_session)):
        element = _lookup(archive.element, element_id)
        episodic = archive.episodic_context(element_id, depth)
        activity = archive.activity(element.activity)
        schema = archive.schema_for_instance(element.instance)
        categorical = categorical_context(schema, activity.category, 1)
        return {"episodic": episodic.to_dict(), "categorical": categorical.to_dict()}

    @app.get("/api/instances/{instance_id}/graph")
    def instance_graph(instance_id: str, session: Session = Depends(current_session)):
        _lookup(archive.instance, instance_id)
        return archive.instance_graph(instance_id).to_dict()

    @app.get("/api/actors/{actor}/profile")
    def actor_profile(actor: str, session: Session = Depends(current_session)):
        return archive.expertise_profile(actor).to_dict()

    # -- retrieval -------------------------------------------------------------

    @app.post("/api/search")
    def run_search(body: SearchRequest, session: Session = Depends(current_session)):
        if body.k < 1:
            raise ApiError(422, "invalid_k", f"k must be >= 1, got {body.k}")
        index = _current_index()
        if body.context is None:
            hits = search(index, body.query, body.k, config=config.scoring)
        else:
            try:
                instance = archive.instance(body.context.instance)
            except NotFoundError as exc:
                raise InvalidInputError("unresolvable_context", exc.message) from exc
            schema = archive.get_schema(instance.schema_id, instance.schema_version)
            ctx = WorkContext(
                instance=instance.id,
                activity_category=body.context.activity_category,
                schema_id=schema.id,
                schema_version=schema.version,
            )
            hits = contextual_search(
                index, schema, body.query, ctx, body.k,
                semantic=body.semantic, config=config.scoring,
            )
        hits = annotate_hits(archive, hits)
        return {"hits": [h.to_dict() for h in hits], "built_at_seq": index.built_at_seq}

    @app.post("/api/admin/reindex")
    def reindex(body: ReindexRequest, session: Session = Depends(current_session)):
        if not body.admin:
            raise ApiError(403, "not_admin", "reindex requires the admin flag")
        index = retrieval.build_index(archive, stem=config.stem, drop_stopwords=config.drop_stopwords)
        app.state.index = index  # atomic swap; in-flight searches keep the old one
        return {"built_at_seq": index.built_at_seq, "doc_count": index.N}

    return app


def serve(config: ServiceConfig) -> None:  # pragma: no cover - process entry
    import uvicorn

    archive = Archive.open(config.archive_dir, seed=config.seed)
    app = build_app(archive, config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
