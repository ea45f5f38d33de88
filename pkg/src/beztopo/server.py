"""Session HTTP API (JSON over HTTP, versioned under "api": 1).

Edits within a session are serialized; expensive analyses run off the
request path and announce completion on the per-session event stream
(text/event-stream).  The UI consumes exactly this surface.
"""
from __future__ import annotations

import json
import queue
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import fixtures
from .errors import DomainError
from .geometry import ControlPolygon
from .workbench import API_VERSION, SessionStore


class PolygonBody(BaseModel):
    degree: Optional[int] = None
    points: list


class CreateSession(BaseModel):
    fixture: Optional[str] = None
    polygon: Optional[PolygonBody] = None


class VertexOp(BaseModel):
    op: str                      # move | insert | delete
    point: Optional[list] = None


class AnalysisRequest(BaseModel):
    checks: list[str] = ["simple", "selfx"]


def _polygon_from_body(body: PolygonBody) -> ControlPolygon:
    try:
        polygon = ControlPolygon(body.points)
    except (DomainError, TypeError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    if body.degree is not None and body.degree != polygon.degree:
        raise HTTPException(status_code=422,
                            detail=f"degree {body.degree} does not match "
                                   f"{len(body.points)} points")
    return polygon


def create_app(store: SessionStore | None = None) -> FastAPI:
    store = store or SessionStore()
    app = FastAPI(title="beztopo session API")
    app.state.store = store

    def get_session(session_id: str):
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")

    @app.post("/sessions")
    def create_session(body: CreateSession):
        if body.polygon is not None:
            polygon = _polygon_from_body(body.polygon)
        elif body.fixture is not None:
            try:
                polygon = fixtures.load_fixture(body.fixture)
            except KeyError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
        else:
            polygon = fixtures.trefoil_polygon()
        session = store.create(polygon)
        return session.snapshot()

    @app.get("/sessions/{session_id}/polygon")
    def get_polygon(session_id: str):
        return get_session(session_id).snapshot()

    @app.put("/sessions/{session_id}/polygon")
    def put_polygon(session_id: str, body: PolygonBody):
        session = get_session(session_id)
        session.set_polygon(_polygon_from_body(body))
        return session.snapshot()

    @app.post("/sessions/{session_id}/vertex/{index}")
    def vertex_op(session_id: str, index: int, body: VertexOp):
        session = get_session(session_id)
        try:
            if body.op == "move":
                if body.point is None:
                    raise HTTPException(status_code=422, detail="move needs a point")
                session.move_vertex(index, body.point)
            elif body.op == "insert":
                if body.point is None:
                    raise HTTPException(status_code=422, detail="insert needs a point")
                session.insert_vertex(index, body.point)
            elif body.op == "delete":
                session.delete_vertex(index)
            else:
                raise HTTPException(status_code=422, detail=f"unknown op {body.op!r}")
        except (IndexError, ValueError, DomainError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        snap = session.snapshot()
        snap["quick"] = session.quick_analysis()
        return snap

    @app.get("/sessions/{session_id}/samples")
    def samples(session_id: str, count: int = 512):
        session = get_session(session_id)
        if not 2 <= count <= 100_000:
            raise HTTPException(status_code=422, detail="count must be in [2, 100000]")
        pts = session.samples(count)
        return {"api": API_VERSION, "version": session.version,
                "count": len(pts), "points": pts.tolist()}

    @app.get("/sessions/{session_id}/subdivision")
    def subdivision(session_id: str, u: float = 0.5, depth: int = 1):
        session = get_session(session_id)
        if not 0.0 < u < 1.0:
            raise HTTPException(status_code=422, detail="u must lie in (0, 1)")
        if not 0 <= depth <= 10:
            raise HTTPException(status_code=422, detail="depth must lie in [0, 10]")
        pieces = session.subdivision(u, depth)
        return {"api": API_VERSION, "u": u, "depth": depth,
                "polygons": [piece.tolist() for piece in pieces]}

    @app.post("/sessions/{session_id}/analysis", status_code=202)
    def analysis(session_id: str, body: AnalysisRequest):
        session = get_session(session_id)
        bad = [c for c in body.checks if c not in ("simple", "selfx", "knot", "pushes")]
        if bad:
            raise HTTPException(status_code=422, detail=f"unknown checks {bad}")
        thread = threading.Thread(target=session.run_analysis, args=(body.checks,),
                                  daemon=True)
        thread.start()
        return {"api": API_VERSION, "status": "scheduled", "checks": body.checks,
                "version": session.version}

    @app.get("/sessions/{session_id}/certificates")
    def certificates(session_id: str):
        session = get_session(session_id)
        return {"api": API_VERSION, "certificates": session.certificates()}

    @app.get("/sessions/{session_id}/events")
    def events(session_id: str, request: Request):
        session = get_session(session_id)
        q = session.subscribe()

        def stream():
            try:
                yield f"data: {json.dumps({'type': 'connected', 'id': session.id})}\n\n"
                while True:
                    try:
                        event = q.get(timeout=1.0)
                    except queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    yield f"data: {json.dumps(event)}\n\n"
                    if event.get("type") == "session-closed":
                        return
            finally:
                session.unsubscribe(q)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.delete("/sessions/{session_id}", status_code=204)
    def close_session(session_id: str):
        get_session(session_id)
        store.drop(session_id)

    # the browser UI, when built (frontend/: npm run build); same origin as the API
    ui_dir = Path(__file__).resolve().parents[2] / "frontend"
    if (ui_dir / "dist").is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
