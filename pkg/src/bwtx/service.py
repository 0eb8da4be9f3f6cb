"""HTTP JSON API over the engine; holds sessions in memory.

Byte payloads travel as base64. Errors always serialize as
{"code": ..., "message": ...} with the code taken from the raised error
class. Reads run lock-free against immutable transforms; mutations of one
session are serialized by a per-session lock.
"""

from __future__ import annotations

import base64
import binascii
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import analysis
from .core import build_transform
from .errors import (
    BwtxError,
    CycleDetected,
    EmptyText,
    OutOfBounds,
    TextTooLarge,
    WindowTooLarge,
)
from .matrix import WindowSpec, find_match, locate_row, prefix_search, window
from .ordering import PRESETS, AlphabetOrdering, parse_ordering, preset_ordering
from .session import (
    CACHE_L,
    CACHE_NONE,
    Session,
    SessionTransform,
    load_session,
    save_session,
)
from .text import TextBuffer

DEFAULT_PORT = 8374
MAX_TEXT_BYTES = 64 * 1024 * 1024
MAX_WINDOW_DIM = 1024

_STATUS_BY_CODE = {
    "EmptyText": 400,
    "TextTooLarge": 413,
    "OutOfBounds": 416,
    "CycleDetected": 409,
}


@dataclass
class SessionHandle:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    next_transform: int = 1

    def fresh_transform_id(self) -> str:
        tid = f"t{self.next_transform}"
        self.next_transform += 1
        return tid

    def sync_counter(self) -> None:
        """Keep generated ids clear of whatever an imported file used."""
        taken = {t.id for t in self.session.transforms}
        n = len(taken) + 1
        while f"t{n}" in taken:
            n += 1
        self.next_transform = n


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _ordering_for(spec: str, text: TextBuffer) -> AlphabetOrdering:
    if spec in PRESETS:
        return preset_ordering(spec, text)
    return parse_ordering(spec, text)


def _session_summary(sid: str, handle: SessionHandle) -> dict:
    s = handle.session
    counts = s.text.byte_counts
    return {
        "session_id": sid,
        "size": s.text.n,
        "m": s.text.m,
        "end_marker": s.text.end_marker,
        "alphabet": [
            {"byte": int(b), "count": int(counts[b])} for b in s.text.alphabet
        ],
        "window": {"rows": s.window_rows, "cols": s.window_cols},
        "transforms": [_transform_summary(st) for st in s.transforms],
    }


def _transform_summary(st: SessionTransform) -> dict:
    built = st.transform
    return {
        "id": st.id,
        "name": st.name,
        "order": list(st.ordering.order),
        "spec": st.ordering.spec_string(),
        "highlights": list(st.highlights),
        "stats": built.stats.as_dict() if built else None,
    }


def create_app() -> FastAPI:
    app = FastAPI(title="bwtx", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, SessionHandle] = {}
    app.state.sessions = sessions

    @app.exception_handler(BwtxError)
    async def bwtx_error(_req: Request, exc: BwtxError):
        status = _STATUS_BY_CODE.get(exc.code, 422)
        body = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, CycleDetected):
            body["cycle"] = exc.cycle
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "ValidationError", "message": str(exc.errors()[:3])},
        )

    @app.exception_handler(HTTPException)
    async def http_error(_req: Request, exc: HTTPException):
        if isinstance(exc.detail, dict) and "code" in exc.detail:
            return JSONResponse(status_code=exc.status_code, content=exc.detail)
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": "HTTPError", "message": str(exc.detail)},
        )

    def get_handle(sid: str) -> SessionHandle:
        handle = sessions.get(sid)
        if handle is None:
            raise HTTPException(
                404, detail={"code": "NotFound", "message": f"no session {sid!r}"}
            )
        return handle

    def get_entry(handle: SessionHandle, tid: str) -> SessionTransform:
        for st in handle.session.transforms:
            if st.id == tid:
                return st
        raise HTTPException(
            404, detail={"code": "NotFound", "message": f"no transform {tid!r}"}
        )

    def register(session: Session) -> str:
        sid = uuid.uuid4().hex[:12]
        handle = SessionHandle(session=session)
        handle.sync_counter()
        sessions[sid] = handle
        return sid

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await request.body()
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("application/json"):
            import json

            try:
                doc = json.loads(body)
                data = base64.b64decode(doc["text"], validate=True)
            except (KeyError, TypeError, ValueError, binascii.Error) as exc:
                raise HTTPException(
                    422,
                    detail={
                        "code": "ValidationError",
                        "message": f"expected {{'text': base64}}: {exc}",
                    },
                )
        else:
            data = bytes(body)
        if len(data) > MAX_TEXT_BYTES:
            raise TextTooLarge(f"text exceeds {MAX_TEXT_BYTES} bytes")
        if not data:
            raise EmptyText("empty input text")
        text = TextBuffer.load(data)
        sid = register(Session(text=text))
        return _session_summary(sid, sessions[sid])

    @app.get("/sessions/{sid}")
    def session_summary(sid: str):
        return _session_summary(sid, get_handle(sid))

    @app.post("/sessions/{sid}/transforms")
    def add_transform(sid: str, body: dict):
        handle = get_handle(sid)
        spec = body.get("ordering")
        if not isinstance(spec, str) or not spec:
            raise HTTPException(
                422,
                detail={"code": "ValidationError", "message": "ordering must be a string"},
            )
        text = handle.session.text
        ordering = _ordering_for(spec, text)
        built = build_transform(text, ordering)
        with handle.lock:
            tid = handle.fresh_transform_id()
            st = SessionTransform(
                id=tid,
                name=str(body.get("name") or ordering.name),
                ordering=ordering,
                transform=built,
            )
            handle.session.transforms.append(st)
        return {"transform_id": tid, **_transform_summary(st)}

    @app.get("/sessions/{sid}/transforms/{tid}/window")
    def get_window(
        sid: str,
        tid: str,
        top_row: int = 0,
        left_col: int = 0,
        height: int | None = None,
        width: int | None = None,
    ):
        handle = get_handle(sid)
        st = get_entry(handle, tid)
        s = handle.session
        h = height if height is not None else s.window_rows
        w = width if width is not None else s.window_cols
        if h > MAX_WINDOW_DIM or w > MAX_WINDOW_DIM:
            raise WindowTooLarge(f"window dimensions capped at {MAX_WINDOW_DIM}")
        grid = window(st.built(s.text), WindowSpec(top_row, left_col, h, w))
        return {
            "top_row": grid.top_row,
            "left_col": grid.left_col,
            "height": grid.height,
            "width": grid.width,
            "m": st.transform.m,
            "rows": [_b64(grid.row_bytes(i)) for i in range(grid.height)],
            "l_column": _b64(grid.l_slice),
            "truncated": list(grid.truncated),
        }

    @app.get("/sessions/{sid}/transforms/{tid}/search")
    def search(
        sid: str,
        tid: str,
        pattern: str | None = None,
        pattern_b64: str | None = None,
        from_row: int | None = None,
        direction: Literal["forward", "backward"] = "forward",
    ):
        handle = get_handle(sid)
        st = get_entry(handle, tid)
        if pattern_b64 is not None:
            try:
                needle = base64.b64decode(pattern_b64, validate=True)
            except binascii.Error as exc:
                raise HTTPException(
                    422,
                    detail={"code": "ValidationError", "message": f"bad base64: {exc}"},
                )
        elif pattern is not None:
            needle = pattern.encode("utf-8")
        else:
            raise HTTPException(
                422,
                detail={"code": "ValidationError", "message": "pattern required"},
            )
        if not needle:
            raise HTTPException(
                422,
                detail={"code": "ValidationError", "message": "pattern must be non-empty"},
            )
        t = st.built(handle.session.text)
        lo, hi = prefix_search(t, needle)
        if lo == hi:
            row = None
        elif from_row is None:
            row = lo if direction == "forward" else hi - 1
        else:
            row = find_match(t, needle, from_row, direction)
        return {"row": row, "interval": [lo, hi]}

    @app.post("/sessions/{sid}/transforms/{tid}/highlights")
    def set_highlight(sid: str, tid: str, body: dict):
        handle = get_handle(sid)
        st = get_entry(handle, tid)
        row = body.get("row")
        on = body.get("on", True)
        m = handle.session.text.m
        if not isinstance(row, int) or isinstance(row, bool) or not (0 <= row < m):
            raise OutOfBounds(f"row must be an integer in 0..{m - 1}")
        with handle.lock:
            marked = set(st.highlights)
            (marked.add if on else marked.discard)(row)
            st.highlights = sorted(marked)
        return {"transform_id": tid, "highlights": st.highlights}

    @app.post("/sessions/{sid}/transforms/{tid}/propagate")
    def propagate(sid: str, tid: str, body: dict):
        handle = get_handle(sid)
        src_entry = get_entry(handle, tid)
        row = body.get("row")
        m = handle.session.text.m
        if not isinstance(row, int) or isinstance(row, bool) or not (0 <= row < m):
            raise OutOfBounds(f"row must be an integer in 0..{m - 1}")
        s = handle.session
        src = src_entry.built(s.text)
        rows: dict[str, int] = {}
        with handle.lock:
            for st in s.transforms:
                target = locate_row(src, row, st.built(s.text))
                rows[st.id] = target
                if target not in st.highlights:
                    st.highlights = sorted(st.highlights + [target])
        return {
            "rows": rows,
            "highlights": {st.id: list(st.highlights) for st in s.transforms},
        }

    @app.get("/sessions/{sid}/transforms/{tid}/analysis")
    def analyze(
        sid: str,
        tid: str,
        kind: Literal["run_breakers", "potential_runs", "sections", "pairs"] = Query(),
        max_gap: int = analysis.DEFAULT_MAX_GAP,
        section: int | None = None,
    ):
        handle = get_handle(sid)
        st = get_entry(handle, tid)
        t = st.built(handle.session.text)
        if kind == "run_breakers":
            items = [b.as_dict() for b in analysis.run_breakers(t)]
        elif kind == "potential_runs":
            items = [g.as_dict() for g in analysis.potential_runs(t, max_gap=max_gap)]
        elif kind == "sections":
            items = [s.as_dict() for s in analysis.sections(t)]
        else:
            secs = analysis.sections(t)
            if section is not None:
                if not (0 <= section < len(secs)):
                    raise OutOfBounds(f"section index outside 0..{len(secs) - 1}")
                secs = [secs[section]]
            items = [
                {
                    "section": sec.as_dict(),
                    "pairs": [p.as_dict() for p in analysis.distinguishing_pairs(t, sec)],
                }
                for sec in secs
            ]
        return {"kind": kind, "items": items}

    @app.post("/sessions/{sid}/orderings/propose")
    def propose(sid: str, body: dict):
        handle = get_handle(sid)
        s = handle.session
        base_tid = body.get("base")
        if base_tid is not None:
            base = get_entry(handle, str(base_tid)).ordering
        elif s.transforms:
            base = s.transforms[0].ordering
        else:
            base = preset_ordering("ascii", s.text)
        if "move" in body and body["move"] is not None:
            mv = body["move"]
            try:
                proposed = analysis.move_char(
                    base, int(mv["ch"]), int(mv["anchor"]), str(mv["placement"])
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise HTTPException(
                    422,
                    detail={"code": "ValidationError", "message": f"bad move: {exc}"},
                )
        else:
            raw = body.get("constraints", [])
            if not isinstance(raw, list):
                raise HTTPException(
                    422,
                    detail={"code": "ValidationError", "message": "constraints must be a list"},
                )
            try:
                constraints = [
                    analysis.OrderConstraint(int(c["lesser"]), int(c["greater"]))
                    for c in raw
                ]
            except (KeyError, TypeError, ValueError) as exc:
                raise HTTPException(
                    422,
                    detail={"code": "ValidationError", "message": f"bad constraint: {exc}"},
                )
            proposed = analysis.combine_constraints(constraints, base)
        stats = analysis.evaluate_ordering(s.text, proposed)
        return {
            "order": list(proposed.order),
            "spec": proposed.spec_string(),
            "preview_stats": stats.as_dict(),
        }

    @app.get("/sessions/{sid}/export")
    def export_session(sid: str, cache: bool = False):
        handle = get_handle(sid)
        with handle.lock:
            blob = save_session(handle.session, cache=cache)
            handle.session.cache_policy = CACHE_L if cache else CACHE_NONE
        return Response(
            content=blob,
            media_type="application/octet-stream",
            headers={"Content-Disposition": f'attachment; filename="{sid}.bwtx"'},
        )

    @app.post("/sessions/import")
    async def import_new(request: Request):
        blob = await request.body()
        session = load_session(blob)
        sid = register(session)
        return _session_summary(sid, sessions[sid])

    @app.post("/sessions/{sid}/import")
    async def import_replace(sid: str, request: Request):
        handle = get_handle(sid)
        blob = await request.body()
        session = load_session(blob)
        with handle.lock:
            handle.session = session
            handle.sync_counter()
        return _session_summary(sid, handle)

    _mount_frontend(app)
    return app


def _mount_frontend(app: FastAPI) -> None:
    """Serve the built browser UI when a dist directory is around."""
    root = os.environ.get("BWTX_FRONTEND_DIR")
    candidates = [Path(root)] if root else [
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
        Path.cwd() / "frontend" / "dist",
    ]
    for cand in candidates:
        if cand and cand.is_dir() and (cand / "index.html").exists():
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=str(cand), html=True), name="ui")
            return


app = create_app()
