"""HTTP service exposing diagnosis sessions as a JSON API.

Sessions live in memory keyed by a random id; every engine transition is
appended to a JSONL log before the response goes out, so a restarted
process can reconstruct any session's outcome from the log alone
(:func:`fitodx.sessionlog.replay_log`). Requests for one session are
serialized by a per-session lock; requests across sessions run in
parallel over the shared immutable knowledge base.

Configuration comes from flags or ``FITODX_*`` environment variables
(flags win): KB path, listen address, log path, image directory, session
TTL. Idle sessions are evicted lazily after the TTL; finished ones remain
reconstructable from the log.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping, Optional

from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import FileResponse, PlainTextResponse
from pydantic import BaseModel, ConfigDict

from . import engine, sessionlog
from .dsl import load_kb_file
from .model import (
    Diagnose,
    KnowledgeBase,
    QuestionId,
    UnknownAnswerToken,
    answer_from_token,
)

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8080
DEFAULT_LOG = "sessions.jsonl"
DEFAULT_TTL_SECONDS = 24 * 60 * 60


@dataclass(frozen=True)
class ServiceConfig:
    kb_path: str
    host: str = DEFAULT_HOST
    port: int = DEFAULT_PORT
    log_path: str = DEFAULT_LOG
    image_dir: Optional[str] = None  # default: <kb dir>/images
    ttl_seconds: float = DEFAULT_TTL_SECONDS

    def resolved_image_dir(self) -> Path:
        if self.image_dir is not None:
            return Path(self.image_dir)
        return Path(self.kb_path).parent / "images"


def config_from_env(environ: Mapping[str, str], kb_path: Optional[str] = None) -> ServiceConfig:
    """Build a config from FITODX_* variables; explicit arguments win."""
    kb = kb_path or environ.get("FITODX_KB", "")
    if not kb:
        raise ValueError("no knowledge base path: pass --kb or set FITODX_KB")
    cfg = ServiceConfig(kb_path=kb)
    if "FITODX_HOST" in environ:
        cfg = replace(cfg, host=environ["FITODX_HOST"])
    if "FITODX_PORT" in environ:
        cfg = replace(cfg, port=int(environ["FITODX_PORT"]))
    if "FITODX_LOG" in environ:
        cfg = replace(cfg, log_path=environ["FITODX_LOG"])
    if "FITODX_IMAGE_DIR" in environ:
        cfg = replace(cfg, image_dir=environ["FITODX_IMAGE_DIR"])
    if "FITODX_TTL_SECONDS" in environ:
        cfg = replace(cfg, ttl_seconds=float(environ["FITODX_TTL_SECONDS"]))
    return cfg


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class SessionRecord:
    session_id: str
    created_at: str
    updated_at: str
    state: engine.EngineState
    client_note: Optional[str] = None
    last_touch: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory session table with lazy TTL eviction.

    ``clock`` is injectable so tests can age sessions without sleeping.
    """

    def __init__(self, ttl_seconds: float, clock: Callable[[], float] = time.monotonic):
        self.ttl = ttl_seconds
        self.clock = clock
        self._table: dict[str, SessionRecord] = {}
        self._lock = threading.Lock()

    def create(self, state: engine.EngineState, client_note: Optional[str]) -> SessionRecord:
        now = self.clock()
        record = SessionRecord(
            session_id=secrets.token_hex(16),
            created_at=_now_iso(),
            updated_at=_now_iso(),
            state=state,
            client_note=client_note,
            last_touch=now,
        )
        with self._lock:
            self._evict(now)
            self._table[record.session_id] = record
        return record

    def get(self, session_id: str) -> Optional[SessionRecord]:
        with self._lock:
            record = self._table.get(session_id)
            if record is not None:
                record.last_touch = self.clock()
            return record

    def _evict(self, now: float) -> None:
        expired = [
            sid for sid, r in self._table.items() if now - r.last_touch > self.ttl
        ]
        for sid in expired:
            del self._table[sid]

    def __len__(self) -> int:
        with self._lock:
            return len(self._table)


class CreateSessionBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    client_note: Optional[str] = None


class AnswerBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    question_id: str
    answer: str


def _pending_payload(state: engine.EngineState) -> dict:
    q = state.pending
    assert q is not None
    return {
        "question_id": q.global_key(),
        "prompt": state.kb.question(q).text,
        "ordinal": len(engine.asked_questions(state)) + 1,
    }


def _result_payload(state: engine.EngineState) -> dict:
    return sessionlog.outcome_to_json(state.outcome)


def _step_payload(state: engine.EngineState) -> dict:
    if state.pending is not None:
        return {"pending": _pending_payload(state)}
    return {"result": _result_payload(state)}


def create_app(
    config: ServiceConfig,
    clock: Callable[[], float] = time.monotonic,
) -> FastAPI:
    """Assemble the service. The KB is loaded once, at startup; a load
    failure keeps the app serving 503 on KB-dependent endpoints so the
    problem is visible where clients look.
    """
    app = FastAPI(title="fitodx", docs_url=None, redoc_url=None)

    result = load_kb_file(config.kb_path)
    kb: Optional[KnowledgeBase] = result.kb
    kb_errors = [str(d) for d in result.errors]
    store = SessionStore(config.ttl_seconds, clock)
    log = sessionlog.SessionLog(config.log_path)
    image_dir = config.resolved_image_dir().resolve()

    app.state.kb = kb
    app.state.store = store
    app.state.log = log
    app.router.on_shutdown.append(log.close)

    def require_kb() -> KnowledgeBase:
        if kb is None:
            raise HTTPException(503, detail={"error": "knowledge base failed to load",
                                             "diagnostics": kb_errors})
        return kb

    def require_session(session_id: str) -> SessionRecord:
        record = store.get(session_id)
        if record is None:
            raise HTTPException(404, detail=f"unknown session {session_id}")
        return record

    def append_new_events(record: SessionRecord, since: int) -> None:
        for event in record.state.trace[since:]:
            log.append(record.session_id, event)

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: Optional[CreateSessionBody] = None) -> dict:
        the_kb = require_kb()
        state = engine.start(the_kb)
        note = body.client_note if body is not None else None
        record = store.create(state, note)
        append_new_events(record, 0)
        payload = {"session_id": record.session_id}
        payload.update(_step_payload(state))
        return payload

    @app.post("/v1/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerBody) -> dict:
        require_kb()
        record = require_session(session_id)
        try:
            answer = answer_from_token(body.answer)
        except UnknownAnswerToken as exc:
            raise HTTPException(422, detail=str(exc))
        try:
            question = QuestionId.from_key(body.question_id)
        except ValueError as exc:
            raise HTTPException(422, detail=str(exc))
        with record.lock:
            before = len(record.state.trace)
            try:
                engine.submit_answer(record.state, question, answer)
            except engine.SessionFinished:
                raise HTTPException(409, detail="session already finished")
            except engine.NotPending as exc:
                raise HTTPException(409, detail=str(exc))
            record.updated_at = _now_iso()
            append_new_events(record, before)
            return _step_payload(record.state)

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        require_kb()
        record = require_session(session_id)
        with record.lock:
            state = record.state
            payload: dict = {
                "session_id": record.session_id,
                "created_at": record.created_at,
                "finished": state.finished,
                "asked": [
                    {
                        "question_id": e.question.global_key(),
                        "prompt": e.prompt,
                        "answer": e.answer.token,
                    }
                    for e in state.trace
                    if isinstance(e, engine.Asked)
                ],
            }
            if record.client_note is not None:
                payload["client_note"] = record.client_note
            if state.pending is not None:
                payload["pending"] = _pending_payload(state)
            if state.outcome is not None:
                payload["result"] = _result_payload(state)
            return payload

    @app.get("/v1/sessions/{session_id}/explanation")
    def get_explanation(session_id: str) -> dict:
        require_kb()
        record = require_session(session_id)
        with record.lock:
            try:
                report = engine.explain(record.state)
            except engine.SessionUnfinished:
                raise HTTPException(409, detail="session not finished")
            payload: dict = {
                "outcome": sessionlog.outcome_to_json(report.outcome),
                "fired": None,
                "supporting": [
                    {
                        "question_id": pair.question.global_key(),
                        "prompt": pair.prompt,
                        "answer": pair.answer.token,
                    }
                    for pair in report.supporting
                ],
                "failed_rules": [
                    {
                        "module": fr.module,
                        "rule": fr.rule,
                        "failed_at": fr.failed_at.global_key(),
                    }
                    for fr in report.failed_rules
                ],
            }
            if report.fired_rule is not None:
                payload["fired"] = {"module": report.fired_module, "rule": report.fired_rule}
            return payload

    @app.get("/v1/kb")
    def get_kb_summary() -> dict:
        the_kb = require_kb()
        crops = []
        for module in the_kb.modules:
            if module.name == the_kb.entry:
                continue
            diagnoses = [
                rule.consequent.diagnosis.name
                for rule in module.rules
                if isinstance(rule.consequent, Diagnose)
            ]
            crops.append(
                {
                    "module": module.name,
                    "question_count": len(module.questions),
                    "diagnoses": diagnoses,
                }
            )
        return {"title": the_kb.title, "version": the_kb.version, "crops": crops}

    @app.get("/v1/images/{image_path:path}")
    def get_image(image_path: str) -> Response:
        candidate = (image_dir / image_path).resolve()
        if not candidate.is_relative_to(image_dir):
            raise HTTPException(404, detail="no such image")
        if not candidate.is_file():
            raise HTTPException(404, detail="no such image")
        return FileResponse(candidate)

    @app.get("/v1/healthz")
    def healthz() -> PlainTextResponse:
        return PlainTextResponse("ok")

    return app
