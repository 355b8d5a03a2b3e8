"""HTTP game service: interactive backtracking sessions against
realizer-derived strategies, with per-session event streams.

Sessions live in memory; every mutation appends events (the same records
the batch engine produces), which clients either poll with a cursor or
consume as a push stream.  The wire format carries the position text, the
knowledge state as an atom list, paginated legal moves, and the full move
history with backtrack markers."""

from __future__ import annotations

import asyncio
import itertools
import json
from dataclasses import dataclass, field
from typing import Optional, Union

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from .corpus import coquand_item, em1_item, minimum_item, staircase
from .games import (
    AtomicPosition, GameError, GameSession, IllegalMove, RealizerEloise,
    abelard_owns, eloise_owns, legal_moves, position_after,
)
from .kernel import KernelError
from .logic import Formula, print_formula
from .oracle import OracleTerm
from .prooffile import load_prelude
from .sexpr import SyntaxError_, parse_all
from .states import LearningSignature
from .syntax import parse_term


DEFAULT_PORT_ENV = "REALIZABILITY_PORT"


# ---------------------------------------------------------------------------
# Wire models
# ---------------------------------------------------------------------------

class CreateSession(BaseModel):
    preset: Optional[str] = None
    prelude: Optional[str] = None
    formula: Optional[str] = None
    realizer: Optional[str] = None
    maxMoves: int = Field(default=10_000, ge=1, le=1_000_000)


class AtomView(BaseModel):
    pred: str
    args: list[int]
    witness: int


class LegalMovesView(BaseModel):
    kind: str                      # "numeral" | "choice" | "none"
    moves: list[Union[int, str]]
    cursor: Optional[int] = None   # next offset for numeral pagination


class MoveRecordView(BaseModel):
    index: int
    player: str
    kind: str
    position: str
    knowledge: str
    backtrackTo: Optional[int] = None


class SessionView(BaseModel):
    id: str
    status: str                    # awaiting-abelard | finished
    winner: Optional[str] = None
    position: str
    knowledge: list[AtomView]
    legalMoves: LegalMovesView
    history: list[MoveRecordView]
    backtracks: int


class MoveRequest(BaseModel):
    move: Union[int, str]
    cursor: Optional[int] = None   # echo of pagination, ignored by the engine


class EventsView(BaseModel):
    events: list[MoveRecordView]
    next: int
    status: str
    winner: Optional[str] = None


# ---------------------------------------------------------------------------
# Sessions
# ---------------------------------------------------------------------------

PAGE = 10


@dataclass
class Session:
    id: str
    formula: Formula
    sig: LearningSignature
    game: GameSession
    realizer_source: str
    events_done: int = 0

    def status(self) -> str:
        return "finished" if self.game.finished else "awaiting-abelard"

    def legal(self, cursor: int = 0) -> LegalMovesView:
        end = self.game.current.end
        if self.game.finished or not abelard_owns(end):
            return LegalMovesView(kind="none", moves=[])
        from .logic import And, ForallNat
        if isinstance(end, ForallNat):
            moves = list(range(cursor, cursor + PAGE))
            return LegalMovesView(kind="numeral", moves=moves,
                                  cursor=cursor + PAGE)
        return LegalMovesView(kind="choice", moves=["left", "right"])

    def view(self, cursor: int = 0) -> SessionView:
        knowledge = [AtomView(pred=a.pred, args=list(a.args), witness=a.witness)
                     for a in self.game.view.state]
        return SessionView(
            id=self.id, status=self.status(), winner=self.game.winner,
            position=print_formula(self.game.current.end),
            knowledge=knowledge, legalMoves=self.legal(cursor),
            history=[MoveRecordView(**r.as_dict()) for r in self.game.records],
            backtracks=self.game.backtracks)

    def events_since(self, since: int) -> EventsView:
        records = [MoveRecordView(**r.as_dict())
                   for r in self.game.records[since:]]
        return EventsView(events=records, next=len(self.game.records),
                          status=self.status(), winner=self.game.winner)


def preset_session(name: str) -> tuple[Formula, LearningSignature, OracleTerm]:
    if name == "em1":
        item = em1_item()
    elif name == "minimum":
        item = minimum_item({x: max(5 - x, 0) for x in range(6)})
    elif name == "coquand":
        item = coquand_item(staircase(3))
    else:
        raise ValueError(f"unknown preset {name!r}")
    return item.formula, item.sig, item.realizer


def custom_session(prelude: Optional[str], formula_text: str,
                   realizer_text: str) -> tuple[Formula, LearningSignature, OracleTerm]:
    sig = LearningSignature()
    if prelude:
        items = parse_all(prelude)
        if len(items) == 1 and isinstance(items[0], list) and items[0][:1] == ["prelude"]:
            items = items[0][1:]
        load_prelude(items, sig)
    from .logic import parse_formula
    formula = parse_formula(formula_text, sig)
    realizer = OracleTerm(parse_term(realizer_text), sig)
    return formula, sig, realizer


def build_app() -> FastAPI:
    app = FastAPI(title="backtracking game service", version="0.1.0")
    sessions: dict[str, Session] = {}
    ids = itertools.count(1)

    def get_session(session_id: str) -> Session:
        if session_id not in sessions:
            raise HTTPException(status_code=404, detail="unknown session")
        return sessions[session_id]

    @app.post("/sessions", response_model=SessionView)
    def create(body: CreateSession) -> SessionView:
        try:
            if body.preset:
                formula, sig, realizer = preset_session(body.preset)
            else:
                if not body.formula or not body.realizer:
                    raise ValueError("need a preset, or a formula and a realizer")
                formula, sig, realizer = custom_session(
                    body.prelude, body.formula, body.realizer)
            game = GameSession(formula, RealizerEloise(realizer), sig,
                               max_moves=body.maxMoves)
            game.advance()
        except (ValueError, SyntaxError_, GameError, KernelError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        sid = f"g{next(ids)}"
        session = Session(sid, formula, sig, game,
                          realizer_source=body.realizer or body.preset or "")
        sessions[sid] = session
        return session.view()

    @app.get("/sessions/{session_id}", response_model=SessionView)
    def get(session_id: str, cursor: int = 0) -> SessionView:
        return get_session(session_id).view(cursor)

    @app.post("/sessions/{session_id}/moves", response_model=EventsView)
    def move(session_id: str, body: MoveRequest) -> EventsView:
        session = get_session(session_id)
        since = len(session.game.records)
        try:
            session.game.offer_abelard(body.move)
        except (IllegalMove, AtomicPosition, GameError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return session.events_since(since)

    @app.post("/sessions/{session_id}/resign", response_model=EventsView)
    def resign(session_id: str) -> EventsView:
        session = get_session(session_id)
        since = len(session.game.records)
        session.game.resign()
        return session.events_since(since)

    @app.get("/sessions/{session_id}/events", response_model=EventsView)
    def events(session_id: str, since: int = 0) -> EventsView:
        return get_session(session_id).events_since(since)

    @app.get("/sessions/{session_id}/stream")
    async def stream(session_id: str, request: Request) -> StreamingResponse:
        session = get_session(session_id)

        async def gen():
            cursor = 0
            while True:
                view = session.events_since(cursor)
                for ev in view.events:
                    yield f"data: {ev.model_dump_json()}\n\n"
                cursor = view.next
                if session.game.finished:
                    yield f"data: {json.dumps({'kind': 'finished', 'winner': session.game.winner})}\n\n"
                    return
                if await request.is_disconnected():
                    return
                await asyncio.sleep(0.05)

        return StreamingResponse(gen(), media_type="text/event-stream")

    return app


app = build_app()
