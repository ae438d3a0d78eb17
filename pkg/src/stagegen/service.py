"""FastAPI service wrapping the session engine.

Each session gets an exclusive lock: one in-flight generation at a time,
concurrent requests across different sessions are fine.  Sessions are
optionally persisted as event logs plus snapshots under a storage root.
"""

from __future__ import annotations

import itertools
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .backend import HashLM, LmBackend, RemoteLM, ScriptedLM
from .errors import (
    DuplicateExhausted,
    EmptyScript,
    InvalidText,
    NoCharacters,
    PromptLineImmutable,
    SessionBusy,
    StagegenError,
    UnknownLine,
    UnknownSession,
)
from .session import Session, SessionConfigs, SessionStore
from .translate import IdentityMt, MtClient, RemoteMt, ReverseMt


@dataclass
class AppConfig:
    lm: str = "hash"               # "hash" | "scripted:FILE" | http(s) URL
    mt: str = "identity"           # "identity" | "reverse" | http(s) URL
    storage: str | None = None     # session persistence root; None = memory only
    seed: int = 0
    overrides: dict = field(default_factory=dict)  # numeric knob overrides
    logical_clock: bool = False    # deterministic timestamps and session ids


def build_backend(cfg: AppConfig) -> LmBackend:
    spec = cfg.lm
    if spec == "hash":
        return HashLM()
    if spec.startswith("scripted:"):
        path = Path(spec.removeprefix("scripted:"))
        lines = [l for l in path.read_text("utf-8").splitlines() if l.strip()]
        return ScriptedLM.cycle(lines)
    if spec.startswith(("http://", "https://")):
        return RemoteLM(base_url=spec)
    raise ValueError(f"unknown LM backend spec {spec!r}")


def build_mt(cfg: AppConfig) -> MtClient:
    spec = cfg.mt
    if spec == "identity":
        return IdentityMt()
    if spec == "reverse":
        return ReverseMt()
    if spec.startswith(("http://", "https://")):
        return RemoteMt(base_url=spec)
    raise ValueError(f"unknown MT client spec {spec!r}")


class SessionManager:
    def __init__(self, cfg: AppConfig):
        self.cfg = cfg
        self.backend = build_backend(cfg)
        self.mt = build_mt(cfg)
        self.store = SessionStore(cfg.storage) if cfg.storage else None
        self.sessions: dict[str, Session] = {}
        self.locks: dict[str, threading.Lock] = {}
        self._counter = itertools.count()
        self._registry_lock = threading.Lock()

    def _new_id(self) -> str:
        if self.cfg.logical_clock:
            return f"s{next(self._counter):06d}"
        return uuid.uuid4().hex

    def _clock(self):
        if self.cfg.logical_clock:
            counter = itertools.count()
            return lambda: float(next(counter))
        return None

    def create(self, prompt_text: str, config_overrides: dict | None = None) -> Session:
        merged = dict(self.cfg.overrides)
        merged.update(config_overrides or {})
        merged.setdefault("seed", self.cfg.seed)
        session = Session.create(
            self._new_id(),
            prompt_text,
            self.backend,
            self.mt,
            configs=SessionConfigs.from_overrides(merged),
            clock=self._clock(),
        )
        with self._registry_lock:
            self.sessions[session.id] = session
            self.locks[session.id] = threading.Lock()
        self._persist(session)
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id}")
        return session

    def lock(self, session_id: str) -> threading.Lock:
        return self.locks[session_id]

    def status(self, session_id: str) -> str:
        return "generating" if self.locks[session_id].locked() else "idle"

    def _persist(self, session: Session) -> None:
        if self.store is not None:
            self.store.save(session)

    def mutate(self, session_id: str, action) -> object:
        """Run a mutating session action under the session's lock."""
        session = self.get(session_id)
        lock = self.lock(session_id)
        if not lock.acquire(blocking=False):
            raise SessionBusy(f"session {session_id} is generating")
        try:
            result = action(session)
        finally:
            lock.release()
        self._persist(session)
        return result


class CreateSessionRequest(BaseModel):
    prompt: str
    config: dict | None = None


class CreateSessionResponse(BaseModel):
    id: str


class LineModel(BaseModel):
    id: int
    kind: str
    text: str
    speaker: str | None
    origin: str


class GenerateResponse(BaseModel):
    line: LineModel


class ManualLineRequest(BaseModel):
    speaker: str
    text: str


class HealthResponse(BaseModel):
    status: str
    lm: str
    mt: str


def create_app(cfg: AppConfig | None = None) -> FastAPI:
    cfg = cfg or AppConfig()
    manager = SessionManager(cfg)
    app = FastAPI(title="stagegen", version="0.1.0")
    app.state.manager = manager

    @app.exception_handler(StagegenError)
    def stagegen_error(request, exc: StagegenError):
        status = 500
        if isinstance(exc, (UnknownLine, UnknownSession)):
            status = 404
        elif isinstance(exc, (NoCharacters, EmptyScript, InvalidText, PromptLineImmutable)):
            status = 400
        elif isinstance(exc, SessionBusy):
            status = 409
        elif isinstance(exc, DuplicateExhausted):
            status = 422
        return JSONResponse(
            status_code=status,
            content={"detail": str(exc), "error": type(exc).__name__},
        )

    @app.get("/healthz", response_model=HealthResponse)
    def healthz():
        return HealthResponse(status="ok", lm=cfg.lm, mt=cfg.mt)

    @app.post("/sessions", status_code=201, response_model=CreateSessionResponse)
    def create_session(req: CreateSessionRequest):
        session = manager.create(req.prompt, req.config)
        return CreateSessionResponse(id=session.id)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = manager.get(session_id)
        state = session.state_dict()
        state["status"] = manager.status(session_id)
        return state

    @app.post("/sessions/{session_id}/generate", response_model=GenerateResponse)
    def generate(session_id: str):
        line = manager.mutate(session_id, lambda s: s.generate_next())
        return GenerateResponse(line=LineModel(**line.__dict__))

    @app.post("/sessions/{session_id}/lines", response_model=GenerateResponse)
    def manual_line(session_id: str, req: ManualLineRequest):
        line = manager.mutate(session_id, lambda s: s.insert_manual(req.speaker, req.text))
        return GenerateResponse(line=LineModel(**line.__dict__))

    @app.post("/sessions/{session_id}/lines/{line_id}/discard")
    def discard(session_id: str, line_id: int):
        manager.mutate(session_id, lambda s: s.discard_from(line_id))
        return {"ok": True}

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str, format: Literal["plain", "structured"] = "plain"):
        session = manager.get(session_id)
        payload = session.export(format)
        media = "text/plain; charset=utf-8" if format == "plain" else "application/json"
        return Response(content=payload, media_type=media)

    return app
