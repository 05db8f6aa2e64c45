"""HTTP API over the session workflow."""

from __future__ import annotations

import threading
from contextlib import contextmanager
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from ..errors import (
    EthiplanError,
    ParseError,
    ResourceLimitError,
    ValidationError,
)
from ..examplelib import list_examples
from ..llm.fixtures import default_mock_provider
from ..llm.provider import HttpProvider
from .comparison import canonical_json
from .config import ServiceConfig
from .session import (
    EditError,
    GenerationError,
    Session,
    SessionInputs,
    SessionManager,
    SessionNotFound,
    SessionStore,
    StageOrderError,
    session_to_doc,
)


class InputsBody(BaseModel):
    domain_text: str
    problem_text: str
    principles: list[str]
    initial_state_notes: str = ""
    assumptions: str = ""
    model: str = "mock-ethicist-v1"


class CreateSessionBody(BaseModel):
    example_id: str | None = None
    inputs: InputsBody | None = None
    model: str | None = None


class AdvanceBody(BaseModel):
    target: str


class RulesPatchBody(BaseModel):
    edits: list[dict] = Field(default_factory=list)


class CodePutBody(BaseModel):
    code: str


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message, **extra})


def build_provider(config: ServiceConfig):
    if config.provider == "http":
        return HttpProvider(config.provider_base_url, config.provider_timeout)
    return default_mock_provider()


def create_app(config: ServiceConfig | None = None, provider=None) -> FastAPI:
    config = config or ServiceConfig()
    store = SessionStore(config.storage_dir)
    manager = SessionManager(config, store, provider or build_provider(config))

    app = FastAPI(title="ethiplan", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.manager = manager

    locks: dict[str, threading.Lock] = {}
    locks_guard = threading.Lock()
    app.state.session_locks = locks

    @contextmanager
    def session_lock(session_id: str):
        with locks_guard:
            lock = locks.setdefault(session_id, threading.Lock())
        if not lock.acquire(blocking=False):
            raise _Busy()
        try:
            yield
        finally:
            lock.release()

    class _Busy(Exception):
        pass

    @app.exception_handler(_Busy)
    async def busy_handler(request: Request, exc: _Busy):
        return _error(
            409,
            "busy",
            "another operation is in flight for this session; retry shortly",
            retry_after_ms=250,
        )

    @app.exception_handler(SessionNotFound)
    async def not_found_handler(request: Request, exc: SessionNotFound):
        return _error(404, "not-found", str(exc))

    @app.exception_handler(StageOrderError)
    async def stage_handler(request: Request, exc: StageOrderError):
        return _error(409, "stage-order", str(exc))

    @app.exception_handler(GenerationError)
    async def generation_handler(request: Request, exc: GenerationError):
        return _error(
            422,
            "generation-failed",
            str(exc),
            findings=[str(f) for f in exc.findings],
            attempts=exc.attempts,
        )

    @app.exception_handler(EditError)
    async def edit_handler(request: Request, exc: EditError):
        return _error(422, "edit-rejected", str(exc), findings=[str(f) for f in exc.findings])

    @app.exception_handler(ResourceLimitError)
    async def limit_handler(request: Request, exc: ResourceLimitError):
        return _error(422, "resource-limit", str(exc))

    @app.exception_handler(ParseError)
    async def parse_handler(request: Request, exc: ParseError):
        return _error(422, "parse-error", str(exc), line=exc.line, column=exc.column)

    @app.exception_handler(ValidationError)
    async def validation_handler(request: Request, exc: ValidationError):
        return _error(422, "invalid", str(exc))

    @app.exception_handler(EthiplanError)
    async def fallback_handler(request: Request, exc: EthiplanError):
        return _error(422, "error", str(exc))

    def healthz():
        return {"status": "ok"}

    app.get("/healthz")(healthz)
    app.get("/api/v1/healthz")(healthz)

    @app.get("/api/v1/examples")
    def examples():
        return {
            "examples": [
                {
                    "id": e.id,
                    "title": e.title,
                    "domain_key": e.domain_key,
                    "principles": list(e.principles),
                    "initial_state_notes": e.initial_state_notes,
                    "assumptions": e.assumptions,
                    "domain_text": e.domain_text,
                    "problem_text": e.problem_text,
                }
                for e in list_examples()
            ]
        }

    @app.post("/api/v1/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        inputs = None
        if body.inputs is not None:
            inputs = SessionInputs(
                domain_text=body.inputs.domain_text,
                problem_text=body.inputs.problem_text,
                principles=tuple(body.inputs.principles),
                initial_state_notes=body.inputs.initial_state_notes,
                assumptions=body.inputs.assumptions,
                model=body.inputs.model,
            )
        session = manager.create_session(
            inputs=inputs, example_id=body.example_id, model=body.model
        )
        return session_to_doc(session)

    @app.get("/api/v1/sessions/{session_id}")
    def get_session(session_id: str):
        return session_to_doc(manager.store.load(session_id))

    @app.post("/api/v1/sessions/{session_id}/advance")
    def advance(session_id: str, body: AdvanceBody):
        with session_lock(session_id):
            session = manager.store.load(session_id)
            session = manager.advance(session, body.target)
            return session_to_doc(session)

    @app.patch("/api/v1/sessions/{session_id}/rules")
    def patch_rules(session_id: str, body: RulesPatchBody):
        with session_lock(session_id):
            session = manager.store.load(session_id)
            session = manager.mutate(session, body.edits)
            return session_to_doc(session)

    @app.put("/api/v1/sessions/{session_id}/code")
    def put_code(session_id: str, body: CodePutBody):
        with session_lock(session_id):
            session = manager.store.load(session_id)
            session = manager.mutate(session, [{"op": "replace-code", "code": body.code}])
            return session_to_doc(session)

    @app.get("/api/v1/sessions/{session_id}/comparison")
    def comparison(session_id: str):
        session = manager.store.load(session_id)
        if session.stage != "Planned" or session.comparison is None:
            return _error(
                404, "not-available", "comparison is only available in the Planned stage"
            )
        return Response(
            content=canonical_json(session.comparison), media_type="application/json"
        )

    if config.ui_dir and Path(config.ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
