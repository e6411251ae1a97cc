"""HTTP/JSON play service: humans against the perfect-play engine.

Sessions are in-memory with TTL eviction; one lock per session serializes
moves; every session shares the process-wide Grundy cache.  The engine
answers synchronously inside the move request (positions are small).

Wire format: graph ``{"vertices": n, "edges": [[u, w], ...]}`` or
``{"spider": [a, b, c]}`` or ``{"path": n}``; arrows ``{"tail": u,
"head": w}``.  Endpoints: ``POST /games``, ``GET /games/{id}``,
``GET /games/{id}/legal``, ``POST /games/{id}/moves``,
``POST /games/{id}/resign``.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .engine import GrundyEngine, Mode, Player
from .errors import ArrowsError, InvalidGraphError, InvalidParameterError
from .graphs import Graph, Trimming, path_graph, spider_graph, trimming
from .states import Arrow, DormantState, State, state_trim

SESSION_TTL_SECONDS = 3600.0


class GraphIn(BaseModel):
    vertices: int | None = None
    edges: list[tuple[int, int]] | None = None
    spider: tuple[int, int, int] | None = None
    path: int | None = None

    def build(self) -> Graph:
        given = [x is not None for x in (self.vertices, self.spider, self.path)]
        if sum(given) != 1:
            raise InvalidParameterError("give exactly one of vertices+edges, spider, path")
        if self.spider is not None:
            return spider_graph(*self.spider)
        if self.path is not None:
            return path_graph(self.path)
        return Graph(self.vertices, tuple(self.edges or ()))


class CreateIn(BaseModel):
    graph: GraphIn
    mode: Literal["trimmed", "arrows"] = "arrows"
    human_side: Literal["player1", "player2"] = "player1"


class MoveIn(BaseModel):
    tail: int
    head: int


@dataclass
class Session:
    id: str
    mode: Mode
    human: Player
    state: State
    trim: Trimming | None
    history: list[Arrow] = field(default_factory=list)
    resigned_by: Player | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    touched: float = field(default_factory=time.monotonic)

    @property
    def to_move(self) -> Player:
        return Player.ONE if len(self.history) % 2 == 0 else Player.TWO

    @property
    def winner(self) -> Player | None:
        if self.resigned_by is not None:
            return self.resigned_by.other
        if self.state.is_terminal:
            # the last player to mark an arrow wins; with no move at all the
            # player on turn simply loses
            return self.to_move.other
        return None

    def view(self, analysis_value: int | None = None) -> dict:
        winner = self.winner
        payload = {
            "id": self.id,
            "mode": self.mode.value,
            "human_side": self.human.value,
            "status": "in_progress" if winner is None else f"won_by_{winner.value}",
            "winner": None if winner is None else winner.value,
            "to_move": None if winner is not None else self.to_move.value,
            "history": [{"tail": a.tail, "head": a.head} for a in self.history],
            "legal": [] if winner is not None else [
                {"tail": a.tail, "head": a.head}
                for a in sorted(self.state.legal_moves())
            ],
            "graph": {
                "vertices": self.state.graph.vertex_count,
                "edges": [list(e) for e in self.state.graph.edges],
            },
        }
        if analysis_value is not None:
            payload["analysis"] = {"grundy": analysis_value}
        return payload


def _reason(status_code: int, reason: str) -> JSONResponse:
    return JSONResponse(status_code=status_code, content={"reason": reason})


def create_app(engine: GrundyEngine | None = None, ui_dir: str | None = None,
               ttl: float = SESSION_TTL_SECONDS) -> FastAPI:
    engine = engine or GrundyEngine()
    app = FastAPI(title="arrows play service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def purge() -> None:
        now = time.monotonic()
        with registry_lock:
            stale = [k for k, s in sessions.items() if now - s.touched > ttl]
            for k in stale:
                del sessions[k]

    def get_session(session_id: str) -> Session | None:
        purge()
        with registry_lock:
            session = sessions.get(session_id)
        if session is not None:
            session.touched = time.monotonic()
        return session

    def engine_reply(session: Session) -> None:
        if session.winner is not None or session.to_move is session.human:
            return
        move = engine.best_move(session.state)
        if move is None:
            return
        session.state = session.state.apply_move(move)
        session.history.append(move)

    def analysis_value(session: Session) -> int:
        if session.mode is Mode.ARROWS:
            return engine.grundy(state_trim(session.trim, session.state))
        return engine.grundy(session.state)

    @app.post("/games")
    def create_game(body: CreateIn, request: Request):
        try:
            graph = body.graph.build()
        except ArrowsError as exc:
            return _reason(400, str(exc))
        mode = Mode(body.mode)
        if graph.vertex_count == 0 or graph.isolated_vertices():
            return _reason(400, "game graphs need at least one edge and no isolated vertices")
        trim = trimming(graph) if mode is Mode.ARROWS else None
        playable_edges = trim.graph.edge_count if trim else graph.edge_count
        if playable_edges > engine.max_edges:
            return _reason(422, f"graph exceeds the engine bound of {engine.max_edges} edges")
        state = (DormantState if mode is Mode.ARROWS else State).empty(graph)
        session = Session(
            id=secrets.token_hex(8),
            mode=mode,
            human=Player(body.human_side),
            state=state,
            trim=trim,
        )
        engine_reply(session)
        with registry_lock:
            sessions[session.id] = session
        flag = request.query_params.get("analysis") == "1"
        return session.view(analysis_value(session) if flag else None)

    @app.get("/games/{session_id}")
    def get_game(session_id: str, analysis: int = 0):
        session = get_session(session_id)
        if session is None:
            return _reason(404, "unknown game")
        return session.view(analysis_value(session) if analysis else None)

    @app.get("/games/{session_id}/legal")
    def get_legal(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _reason(404, "unknown game")
        return {"moves": session.view()["legal"]}

    @app.post("/games/{session_id}/moves")
    def post_move(session_id: str, body: MoveIn, analysis: int = 0):
        session = get_session(session_id)
        if session is None:
            return _reason(404, "unknown game")
        with session.lock:
            if session.winner is not None:
                return _reason(409, "game-over")
            if session.to_move is not session.human:
                return _reason(409, "not-your-turn")
            arrow = Arrow(body.tail, body.head)
            try:
                violation = session.state.violation(arrow)
            except InvalidParameterError as exc:
                return _reason(400, str(exc))
            if violation is not None:
                if violation.kind == "occupied":
                    return _reason(409, "occupied")
                if session.mode is Mode.ARROWS and violation.vertex in session.state.graph.leaves():
                    return _reason(409, "leaf-violation")
                return _reason(409, f"creates-{violation.kind}")
            session.state = session.state.apply_move(arrow)
            session.history.append(arrow)
            engine_reply(session)
            return session.view(analysis_value(session) if analysis else None)

    @app.post("/games/{session_id}/resign")
    def post_resign(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _reason(404, "unknown game")
        with session.lock:
            if session.winner is not None:
                return _reason(409, "game-over")
            session.resigned_by = session.human
            return session.view()

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


app = create_app()
