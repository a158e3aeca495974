"""HTTP play service: a human drives the environment against a machine.

One session per game.  All adjudication happens through the same
incremental game states the library uses everywhere else, so replaying
a session's run through winner() always reproduces its recorded verdict.
Machine stepping is bounded per request; an empty submit ("poke") hands
the machine more cycles, which is how slow semideciders get to finish.
"""
from __future__ import annotations

import asyncio
import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from .core import BOT, TOP, GameState, LabeledMove, MoveError, check_move_text, format_run, state_moves
from .formula import (
    InterpretError,
    Interpretation,
    ParseError,
    UnboundAtom,
    atom_names,
    interpret,
    parse,
)
from .machine import MalformedSpec, Strategy
from .strategies import ShapeMismatch, UnknownStrategy, make_strategy
from .toymachines import default_catalog

MACHINE_STEPS_PER_REQUEST = 128
DEFAULT_TTL_SECONDS = 1800
STREAM_POLL_SECONDS = 0.2


def _move_token(text: str) -> str:
    return text if text else "_"


def _decode_move(text: str) -> str:
    return "" if text == "_" else text


@dataclass
class Session:
    id: str
    game_state: GameState
    machine: Strategy
    mach_state: Any
    hint_bound: int
    run: tuple = ()
    observed: int = 0
    status: str = "RUNNING"
    winner: Optional[str] = None
    offender: Optional[str] = None
    last_machine_moves: tuple = ()
    version: int = 0
    touched: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def snapshot(self) -> dict:
        hints = []
        if self.status == "RUNNING":
            hints = sorted(
                _move_token(m)
                for m in state_moves(self.game_state, BOT, self.hint_bound)
                if len(m) <= self.hint_bound
            )
        status: dict = {"state": self.status}
        if self.status == "FINISHED":
            status["winner"] = self.winner
            if self.offender is not None:
                status["offender"] = self.offender
        return {
            "id": self.id,
            "run": format_run(self.run),
            "status": status,
            "hints": hints,
            "last_machine_moves": [_move_token(t) for t in self.last_machine_moves],
        }

    def _finish_from_position(self) -> None:
        w = self.game_state.winner()
        self.status = "FINISHED"
        self.winner = w.value

    def _finish_illegal(self, offender) -> None:
        self.status = "FINISHED"
        self.winner = offender.opponent().value
        self.offender = offender.value

    def append_env_moves(self, texts) -> None:
        for text in texts:
            if self.status != "RUNNING":
                return
            move = LabeledMove(BOT, text)
            self.run = self.run + (move,)
            nxt = self.game_state.try_move(move)
            if nxt is None:
                self._finish_illegal(BOT)
                return
            self.game_state = nxt

    def drive_machine(self, budget: int) -> bool:
        """Step the machine up to ``budget`` cycles; True if it went idle."""
        emitted_all = []
        idle = False
        for _ in range(budget):
            if self.status != "RUNNING":
                break
            newly = self.run[self.observed:]
            self.observed = len(self.run)
            prev = self.mach_state
            self.mach_state, emitted = self.machine.step(self.mach_state, newly)
            if emitted is None:
                if not newly and self.mach_state == prev:
                    idle = True
                    break
                continue
            move = LabeledMove(TOP, check_move_text(emitted))
            self.run = self.run + (move,)
            self.observed = len(self.run)
            emitted_all.append(emitted)
            nxt = self.game_state.try_move(move)
            if nxt is None:
                self._finish_illegal(TOP)
                break
            self.game_state = nxt
        self.last_machine_moves = tuple(emitted_all)
        return idle

    def maybe_finish_quiet(self, idle: bool) -> None:
        """A settled position with an idle machine is over; adjudicate it.

        Settled: the machine has gone idle and neither player has a
        legal move within the hint bound.  Only checked after a submit,
        so a fresh session shows RUNNING even on a moveless game.
        """
        if self.status != "RUNNING" or not idle:
            return
        for player in (BOT, TOP):
            if any(len(m) <= self.hint_bound for m in state_moves(self.game_state, player, self.hint_bound)):
                return
        self._finish_from_position()


class CreateBody(BaseModel):
    formula: str
    interp: Optional[dict] = None
    machine: str


class MovesBody(BaseModel):
    moves: list


def build_app(default_interp: Optional[dict] = None, ttl_seconds: Optional[float] = None) -> FastAPI:
    app = FastAPI(title="colgame play service")
    # the browser client may be served from any origin; sessions are
    # unauthenticated throwaways, so a blanket allow is fine
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict = {}
    store_lock = threading.Lock()
    ttl = ttl_seconds if ttl_seconds is not None else float(
        os.environ.get("COL_SESSION_TTL_SECONDS", DEFAULT_TTL_SECONDS)
    )

    def purge() -> None:
        now = time.monotonic()
        with store_lock:
            stale = [sid for sid, s in sessions.items() if now - s.touched > ttl]
            for sid in stale:
                del sessions[sid]

    def get_session(sid: str) -> Session:
        purge()
        with store_lock:
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="no such session")
        session.touched = time.monotonic()
        return session

    @app.post("/sessions")
    def create_session(body: CreateBody):
        purge()
        doc = body.interp if body.interp is not None else (default_interp or {})
        try:
            tree = parse(body.formula)
            interp = Interpretation.from_dict(doc, default_catalog=default_catalog())
            # atoms under quantifiers resolve lazily; missing bindings must
            # fail here, not as a 500 halfway through play
            for name in sorted(atom_names(tree.expr) - interp.atoms.keys()):
                raise UnboundAtom(f"atom {name!r} is not bound by the interpretation")
            game = interpret(tree.expr, interp)
            machine = make_strategy(body.machine, game, tree.expr, interp,
                                    bound=interp.universe_bound)
        except ParseError as exc:
            raise HTTPException(status_code=400, detail=f"formula: {exc}")
        except (InterpretError, UnknownStrategy, ShapeMismatch, MalformedSpec,
                MoveError, ValueError, OSError, json.JSONDecodeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        session = Session(
            id=secrets.token_hex(8),
            game_state=game.start,
            machine=machine,
            mach_state=machine.initial,
            hint_bound=interp.universe_bound,
        )
        with session.lock:
            session.drive_machine(1)
            session.version += 1
        with store_lock:
            sessions[session.id] = session
        return session.snapshot()

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        session = get_session(sid)
        with session.lock:
            return session.snapshot()

    @app.post("/sessions/{sid}/moves")
    def submit_moves(sid: str, body: MovesBody):
        session = get_session(sid)
        try:
            texts = [check_move_text(_decode_move(str(m))) for m in body.moves]
        except MoveError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with session.lock:
            if session.status != "RUNNING":
                raise HTTPException(status_code=409, detail="session is finished")
            session.append_env_moves(texts)
            idle = session.drive_machine(MACHINE_STEPS_PER_REQUEST)
            session.maybe_finish_quiet(idle)
            session.version += 1
            return session.snapshot()

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        get_session(sid)
        with store_lock:
            sessions.pop(sid, None)

    @app.get("/sessions/{sid}/stream")
    async def stream(sid: str, request: Request):
        session = get_session(sid)

        async def events():
            seen = -1
            while True:
                if await request.is_disconnected():
                    return
                with session.lock:
                    version = session.version
                    snap = session.snapshot() if version != seen else None
                if snap is not None:
                    seen = version
                    payload = {k: snap[k] for k in ("run", "status", "hints", "last_machine_moves")}
                    yield f"data: {json.dumps(payload)}\n\n"
                    if snap["status"]["state"] == "FINISHED":
                        return
                await asyncio.sleep(STREAM_POLL_SECONDS)

        return StreamingResponse(events(), media_type="text/event-stream")

    return app
