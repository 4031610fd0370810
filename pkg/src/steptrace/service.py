"""Session-oriented HTTP JSON diagnosis service.

Sessions live in memory and append every event to one JSONL file per
session under the data directory; replaying a file through the same
transition logic reconstructs the session exactly, so a crash loses
nothing. The diagnosis core itself is pure; only per-session advancement
is serialized.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .errors import (
    DegreeTooHigh,
    DepthCapExceeded,
    DomainError,
    ParseError,
    RadicalUnsupported,
    StrategyExhausted,
)
from .expr import EqSet
from .syntax import parse_eqset, render
from .strategy import SUCCEED, Strategy, select_strategy
from .diagnosis import (
    Correct,
    Deviation,
    Diagnosis,
    Finished,
    Hint,
    NotEquivalent,
    Unknown,
    diagnose_with_node,
    hint as strategy_hint,
)

DEFAULT_LOOKAHEAD = 5


def tier_of(d: Diagnosis) -> str:
    """green = accepted, yellow = equivalent but off-strategy, red = wrong."""
    if isinstance(d, (Correct, Finished)):
        return "green"
    if isinstance(d, (Deviation, Unknown)):
        return "yellow"
    return "red"


def diagnosis_record(d: Diagnosis) -> dict:
    record: dict = {"tier": tier_of(d)}
    if isinstance(d, Correct):
        record["class"] = "correct"
        record["steps_combined"] = d.steps_combined
        record["rules"] = [r.value for r in d.rules]
        record["matched_state"] = render(d.matched_state)
        record["is_variant"] = d.is_variant
    elif isinstance(d, Finished):
        record["class"] = "finished"
        record["solution"] = render(d.solution)
    elif isinstance(d, Deviation):
        record["class"] = "deviation"
        record["relation"] = int(d.relation)
        record["feedback_code"] = d.feedback_code
        record["best_candidate"] = render(d.best_candidate)
    elif isinstance(d, NotEquivalent):
        record["class"] = "not-equivalent"
    else:
        record["class"] = "unknown"
    return record


def hint_record(h: Hint) -> dict:
    return {
        "rule": h.rule.value,
        "description": h.description,
        "result_state": render(h.result_state),
    }


@dataclass
class Session:
    id: str
    task: EqSet
    task_text: str
    strategy_name: str
    strategy: Strategy
    canonical: EqSet
    residual: Strategy
    accepted_states: list[str] = field(default_factory=list)
    finished: bool = False
    events: list[dict] = field(default_factory=list)
    last_ts: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def snapshot(self) -> dict:
        """Replay-comparable view of the session state."""
        return {
            "id": self.id,
            "task": render(self.task),
            "strategy": self.strategy_name,
            "accepted_states": list(self.accepted_states),
            "canonical": render(self.canonical),
            "finished": self.finished,
            "events": [dict(e) for e in self.events],
        }

    def summary(self) -> dict:
        return {
            "id": self.id,
            "task": render(self.task),
            "strategy": self.strategy_name,
            "accepted_states": list(self.accepted_states),
            "finished": self.finished,
        }


class SessionStore:
    """In-memory sessions with an append-only event log per session."""

    def __init__(self, data_dir: str | Path | None = None, max_lookahead: int = DEFAULT_LOOKAHEAD):
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.max_lookahead = max_lookahead
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._replay_all()

    # -- persistence -----------------------------------------------------

    def _log_path(self, session_id: str) -> Path | None:
        return None if self.data_dir is None else self.data_dir / f"{session_id}.jsonl"

    def _append_event(self, session: Session, kind: str, payload: dict, persist: bool, ts: int | None = None) -> None:
        now = int(time.time() * 1000) if ts is None else ts
        now = max(now, session.last_ts)
        session.last_ts = now
        event = {"ts": now, "kind": kind, **payload}
        session.events.append(event)
        path = self._log_path(session.id)
        if persist and path is not None:
            with path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event) + "\n")

    def _replay_all(self) -> None:
        for path in sorted(self.data_dir.glob("*.jsonl")):
            self._replay_file(path)

    def _replay_file(self, path: Path) -> None:
        session_id = path.stem
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                kind = event["kind"]
                if kind == "created":
                    self._create(event["task"], session_id=session_id, persist=False, ts=event["ts"])
                elif kind == "step":
                    self._step(session_id, event["input"], persist=False, ts=event["ts"])
                elif kind == "hint":
                    self._hint(session_id, persist=False, ts=event["ts"])

    # -- transitions -----------------------------------------------------

    def _create(self, task_text: str, session_id: str | None = None, persist: bool = True, ts: int | None = None) -> Session:
        task = parse_eqset(task_text)
        name, strategy = select_strategy(task)
        session = Session(
            id=session_id or uuid.uuid4().hex[:12],
            task=task,
            task_text=task_text,
            strategy_name=name,
            strategy=strategy,
            canonical=task,
            residual=strategy,
            accepted_states=[render(task)],
        )
        with self._lock:
            self.sessions[session.id] = session
        self._append_event(session, "created", {"task": task_text, "strategy": name}, persist, ts)
        return session

    def create(self, task_text: str) -> Session:
        return self._create(task_text)

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    def _step(self, session_id: str, input_text: str, persist: bool = True, ts: int | None = None) -> dict:
        session = self.get(session_id)
        with session.lock:
            inp = parse_eqset(input_text)
            diagnosis, node = diagnose_with_node(
                session.canonical, inp, session.residual, session.task, self.max_lookahead
            )
            if isinstance(diagnosis, Correct):
                session.accepted_states.append(render(inp))
                session.canonical = node.state
                session.residual = node.residual
            elif isinstance(diagnosis, Finished):
                session.accepted_states.append(render(inp))
                session.canonical = inp
                session.residual = SUCCEED
                session.finished = True
            record = diagnosis_record(diagnosis)
            self._append_event(session, "step", {"input": input_text, "diagnosis": record}, persist, ts)
            return record

    def step(self, session_id: str, input_text: str) -> dict:
        return self._step(session_id, input_text)

    def _hint(self, session_id: str, persist: bool = True, ts: int | None = None) -> dict:
        session = self.get(session_id)
        with session.lock:
            h = strategy_hint(session.canonical, session.residual)
            record = hint_record(h)
            self._append_event(session, "hint", {"hint": record}, persist, ts)
            return record

    def hint(self, session_id: str) -> dict:
        return self._hint(session_id)


class CreateBody(BaseModel):
    task: str


class StepBody(BaseModel):
    input: str


def create_app(store: SessionStore):
    """FastAPI application speaking the JSON session protocol."""
    from fastapi.middleware.cors import CORSMiddleware

    app = FastAPI(title="steptrace", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def parse_detail(exc: ParseError) -> dict:
        return {"error": str(exc), "offset": exc.offset, "expected": exc.expected}

    @app.post("/sessions")
    def create_session(body: CreateBody):
        try:
            session = store.create(body.task)
        except ParseError as exc:
            raise HTTPException(400, detail=parse_detail(exc))
        except (DegreeTooHigh, RadicalUnsupported) as exc:
            raise HTTPException(400, detail={"error": str(exc)})
        return {"id": session.id, "task": render(session.task), "strategy": session.strategy_name}

    @app.post("/sessions/{session_id}/steps")
    def post_step(session_id: str, body: StepBody):
        try:
            return store.step(session_id, body.input)
        except KeyError:
            raise HTTPException(404, detail={"error": f"unknown session {session_id}"})
        except ParseError as exc:
            raise HTTPException(400, detail=parse_detail(exc))
        except (DegreeTooHigh, DepthCapExceeded, DomainError) as exc:
            raise HTTPException(500, detail={"error": str(exc)})

    @app.get("/sessions/{session_id}/hint")
    def get_hint(session_id: str):
        try:
            return store.hint(session_id)
        except KeyError:
            raise HTTPException(404, detail={"error": f"unknown session {session_id}"})
        except StrategyExhausted as exc:
            raise HTTPException(409, detail={"error": str(exc)})

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            return store.get(session_id).summary()
        except KeyError:
            raise HTTPException(404, detail={"error": f"unknown session {session_id}"})

    return app
