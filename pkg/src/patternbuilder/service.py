"""HTTP API over the session engine.

All canvas payloads use the 10-line text format; the server is the only
place DSL semantics run. Mutations within a session are serialized by the
engine's per-session locks.
"""

from __future__ import annotations

from fastapi import FastAPI, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import lang
from .session import SessionEngine, SessionError, UnknownSessionError


class CreateSessionBody(BaseModel):
    mode: str


class StepBody(BaseModel):
    program: str


class HelperBody(BaseModel):
    step: int
    name: str | None = None


class GalleryBody(BaseModel):
    name: str | None = None


def create_app(engine: SessionEngine, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="patternbuilder task service")
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(UnknownSessionError)
    async def _unknown_session(request, exc):
        return JSONResponse(status_code=404, content={"error": f"unknown session: {exc.args[0]}"})

    @app.exception_handler(SessionError)
    async def _session_error(request, exc):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(lang.LangError)
    async def _lang_error(request, exc):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.post("/api/sessions")
    def create_session(body: CreateSessionBody):
        session = engine.create_session(body.mode)
        return {"session_id": session.session_id, "state": session.to_state()}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        return engine.get_session(session_id).to_state()

    @app.post("/api/sessions/{session_id}/steps")
    def add_step(session_id: str, body: StepBody):
        index, canvas = engine.add_step(session_id, body.program)
        return {"index": index, "canvas": canvas.to_text()}

    @app.post("/api/sessions/{session_id}/helpers")
    def save_helper(session_id: str, body: HelperBody):
        name = engine.save_helper(session_id, body.step, body.name)
        return {"name": name}

    @app.delete("/api/sessions/{session_id}/helpers/{name}")
    def remove_helper(session_id: str, name: str):
        engine.remove_helper(session_id, name)
        return {}

    @app.post("/api/sessions/{session_id}/submit")
    def submit(session_id: str):
        accuracy, points, next_trial = engine.submit(session_id)
        out = {"accuracy": accuracy, "points": points}
        if next_trial is not None:
            out["next_trial"] = next_trial
        return out

    @app.post("/api/sessions/{session_id}/gallery")
    def submit_gallery(session_id: str, body: GalleryBody):
        engine.submit_gallery(session_id, body.name)
        return {}

    @app.get("/api/sessions/{session_id}/log")
    def export_log(session_id: str) -> Response:
        return PlainTextResponse(engine.export_log(session_id))

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
