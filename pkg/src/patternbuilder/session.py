"""Session engine for the interactive building task.

Sessions are event-sourced: every mutation is an event, live state is a pure
fold over the event list, and the line-delimited event log doubles as the
persistence format and the analysis input. Replaying an exported log through
the same fold reproduces the exact state, because the engine itself mutates
state only by applying events.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass

from . import grid, lang
from .grid import Canvas

EVENT_KINDS = (
    "session_started",
    "trial_started",
    "step_added",
    "helper_saved",
    "helper_removed",
    "submitted",
    "gallery_submitted",
    "session_ended",
)

MODES = ("task", "freeplay")


class SessionError(ValueError):
    pass


class UnknownSessionError(KeyError):
    pass


@dataclass(frozen=True)
class SessionEvent:
    ts: float
    session_id: str
    kind: str
    payload: dict

    def to_line(self) -> str:
        return json.dumps(
            {"ts": self.ts, "session_id": self.session_id, "kind": self.kind, "payload": self.payload},
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_line(cls, line: str, lineno: int = 0) -> "SessionEvent":
        try:
            rec = json.loads(line)
            return cls(float(rec["ts"]), str(rec["session_id"]), str(rec["kind"]), dict(rec["payload"]))
        except (ValueError, KeyError, TypeError) as exc:
            raise SessionError(f"malformed event log line {lineno}: {exc}") from exc


@dataclass(frozen=True)
class Step:
    index: int  # 1-based
    program: str  # raw text as submitted
    expr: lang.Expr  # step references inlined; helpers unresolved
    canvas: Canvas


@dataclass(frozen=True)
class Helper:
    name: str
    canvas: Canvas
    source_step: int
    source_program: str


class _Resolver:
    """Name resolution for step evaluation: primitives then session helpers."""

    def __init__(self, primitives: dict[str, Canvas], helpers: dict[str, Helper]):
        self._primitives = primitives
        self._helpers = helpers

    def resolve(self, name: str) -> Canvas | None:
        canvas = self._primitives.get(name)
        if canvas is not None:
            return canvas
        helper = self._helpers.get(name)
        return helper.canvas if helper is not None else None


class Session:
    """Live state of one session; mutated exclusively through apply()."""

    def __init__(self, corpus=None, primitives: dict[str, Canvas] | None = None):
        self.corpus = corpus
        self.primitives = primitives or grid.DEFAULT_PRIMITIVES
        self.session_id: str | None = None
        self.mode: str | None = None
        self.created_at: float | None = None
        self.trial_index = 0
        self.steps: list[Step] = []
        self.helpers: dict[str, Helper] = {}
        self.helpers_saved = 0
        self.points = 0
        self.gallery: list[tuple[str | None, Canvas]] = []
        self.done = False
        self.events: list[SessionEvent] = []

    # -- views -------------------------------------------------------------

    @property
    def trial_id(self) -> str | None:
        if self.mode != "task" or self.corpus is None or self.done:
            return None
        return self.corpus.patterns[self.trial_index][0]

    def target(self) -> Canvas | None:
        if self.mode != "task" or self.corpus is None or self.done:
            return None
        return self.corpus.patterns[self.trial_index][1]

    def to_state(self) -> dict:
        target = self.target()
        return {
            "session_id": self.session_id,
            "mode": self.mode,
            "trial_index": self.trial_index,
            "trial": self.trial_id,
            "target": target.to_text() if target is not None else None,
            "steps": [
                {"index": s.index, "program": s.program, "canvas": s.canvas.to_text()}
                for s in self.steps
            ],
            "helpers": [
                {"name": h.name, "canvas": h.canvas.to_text(), "source_step": h.source_step}
                for h in self.helpers.values()
            ],
            "points": self.points,
            "gallery": [
                {"name": name, "canvas": canvas.to_text()} for name, canvas in self.gallery
            ],
            "done": self.done,
            "created_at": self.created_at,
        }

    # -- the fold ----------------------------------------------------------

    def apply(self, event: SessionEvent) -> None:
        """Validate and apply one event. Raises SessionError without mutating
        state when the event is not legal in the current state."""
        handler = getattr(self, f"_apply_{event.kind}", None)
        if handler is None:
            raise SessionError(f"unknown event kind {event.kind!r}")
        handler(event)
        self.events.append(event)

    def _apply_session_started(self, event: SessionEvent) -> None:
        mode = event.payload.get("mode")
        if mode not in MODES:
            raise SessionError(f"invalid mode {mode!r}")
        if mode == "task" and self.corpus is None:
            raise SessionError("task mode requires a loaded corpus")
        self.session_id = event.session_id
        self.mode = mode
        self.created_at = event.ts

    def _apply_trial_started(self, event: SessionEvent) -> None:
        if self.mode != "task":
            raise SessionError("trials only exist in task mode")
        index = event.payload.get("index")
        if not isinstance(index, int) or not 0 <= index < len(self.corpus):
            raise SessionError(f"invalid trial index {index!r}")
        self.trial_index = index
        self.steps = []

    def _apply_step_added(self, event: SessionEvent) -> None:
        if self.done:
            raise SessionError("session is complete")
        program = event.payload.get("program", "")
        expr = lang.parse(program)
        resolved = lang.inline_steps(expr, [s.expr for s in self.steps])
        for leaf in lang.leaves(resolved):
            if isinstance(leaf, lang.LibraryRef) and leaf.name not in self.helpers:
                raise lang.UnknownHelperError(leaf.name)
        canvas = lang.evaluate(resolved, _Resolver(self.primitives, self.helpers))
        index = len(self.steps) + 1
        if event.payload.get("index") != index:
            raise SessionError(f"step index mismatch: log says {event.payload.get('index')}, state says {index}")
        self.steps.append(Step(index, program, resolved, canvas))

    def _apply_helper_saved(self, event: SessionEvent) -> None:
        name = event.payload.get("name")
        step_index = event.payload.get("step")
        if not isinstance(step_index, int) or not 1 <= step_index <= len(self.steps):
            raise SessionError(f"no step {step_index!r} to save")
        if not isinstance(name, str) or not name:
            raise SessionError("helper name must be a nonempty string")
        if name in self.helpers:
            raise SessionError(f"helper {name!r} already exists")
        if name in lang.RESERVED_IDENTS or lang._STEP_REF.match(name) or not lang._IDENT.fullmatch(name):
            raise SessionError(f"{name!r} is not a valid helper name")
        step = self.steps[step_index - 1]
        self.helpers[name] = Helper(name, step.canvas, step_index, step.program)
        self.helpers_saved += 1

    def _apply_helper_removed(self, event: SessionEvent) -> None:
        name = event.payload.get("name")
        if name not in self.helpers:
            raise SessionError(f"no helper named {name!r}")
        del self.helpers[name]

    def _apply_submitted(self, event: SessionEvent) -> None:
        if self.mode != "task":
            raise SessionError("submit only exists in task mode")
        if self.done:
            raise SessionError("session is complete")
        if not self.steps:
            raise SessionError("cannot submit with zero steps")
        target = self.target()
        accuracy = self.steps[-1].canvas == target
        if bool(event.payload.get("accuracy")) != accuracy:
            raise SessionError("event log accuracy does not match replayed state")
        if accuracy:
            self.points += 1
        self.steps = []
        if self.trial_index + 1 >= len(self.corpus):
            self.done = True

    def _apply_gallery_submitted(self, event: SessionEvent) -> None:
        if self.mode != "freeplay":
            raise SessionError("the gallery only exists in free play")
        if not self.steps:
            raise SessionError("cannot submit with zero steps")
        name = event.payload.get("name")
        if name is not None and not isinstance(name, str):
            raise SessionError("gallery name must be a string or null")
        self.gallery.append((name, self.steps[-1].canvas))
        self.steps = []

    def _apply_session_ended(self, event: SessionEvent) -> None:
        self.done = True


def replay_events(events: list[SessionEvent], corpus=None, primitives=None) -> Session:
    """Fold an event list into a fresh session."""
    session = Session(corpus=corpus, primitives=primitives)
    for event in events:
        session.apply(event)
    return session


def replay_log(text: str, corpus=None, primitives=None) -> Session:
    events = [
        SessionEvent.from_line(line, lineno)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    return replay_events(events, corpus=corpus, primitives=primitives)


class SessionEngine:
    """Creates sessions, serializes their mutations, and persists event logs."""

    def __init__(self, corpus=None, data_dir: str | None = None, clock=time.time,
                 id_factory=None, primitives: dict[str, Canvas] | None = None):
        self.corpus = corpus
        self.data_dir = data_dir
        self.clock = clock
        self.id_factory = id_factory or (lambda: secrets.token_hex(16))
        self.primitives = primitives
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._files: dict[str, object] = {}
        self._registry_lock = threading.Lock()
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)

    # -- internals ---------------------------------------------------------

    def _stamp(self, session: Session) -> float:
        ts = float(self.clock())
        if session.events and ts <= session.events[-1].ts:
            ts = session.events[-1].ts + 1e-6
        return ts

    def _emit(self, session: Session, kind: str, payload: dict) -> SessionEvent:
        event = SessionEvent(self._stamp(session), session.session_id, kind, payload)
        session.apply(event)
        self._persist(session.session_id, event)
        return event

    def _persist(self, session_id: str, event: SessionEvent) -> None:
        fh = self._files.get(session_id)
        if fh is not None:
            fh.write(event.to_line() + "\n")
            fh.flush()

    def _get(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSessionError(session_id)
            return session, self._locks[session_id]

    # -- operations ----------------------------------------------------------

    def create_session(self, mode: str) -> Session:
        if mode not in MODES:
            raise SessionError(f"invalid mode {mode!r}; expected one of {MODES}")
        if mode == "task" and self.corpus is None:
            raise SessionError("task mode requires a loaded corpus")
        session = Session(corpus=self.corpus, primitives=self.primitives)
        session_id = self.id_factory()
        with self._registry_lock:
            if session_id in self._sessions:
                raise SessionError(f"duplicate session id {session_id!r}")
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
            if self.data_dir:
                path = os.path.join(self.data_dir, f"{session_id}.jsonl")
                self._files[session_id] = open(path, "a", encoding="utf-8")
        first = SessionEvent(float(self.clock()), session_id, "session_started", {"mode": mode})
        session.apply(first)
        self._persist(session_id, first)
        if mode == "task":
            self._emit(session, "trial_started", {"index": 0, "trial": session.corpus.patterns[0][0]})
        return session

    def get_session(self, session_id: str) -> Session:
        session, _ = self._get(session_id)
        return session

    def add_step(self, session_id: str, program: str) -> tuple[int, Canvas]:
        session, lock = self._get(session_id)
        with lock:
            index = len(session.steps) + 1
            self._emit(session, "step_added", {"index": index, "program": program})
            return index, session.steps[-1].canvas

    def save_helper(self, session_id: str, step_index: int, name: str | None = None) -> str:
        session, lock = self._get(session_id)
        with lock:
            if name is None:
                n = session.helpers_saved + 1
                name = f"h{n}"
                while name in session.helpers:
                    n += 1
                    name = f"h{n}"
            self._emit(session, "helper_saved", {"name": name, "step": step_index})
            return name

    def remove_helper(self, session_id: str, name: str) -> None:
        session, lock = self._get(session_id)
        with lock:
            self._emit(session, "helper_removed", {"name": name})

    def submit(self, session_id: str) -> tuple[bool, int, str | None]:
        session, lock = self._get(session_id)
        with lock:
            if session.mode != "task":
                raise SessionError("submit only exists in task mode")
            if session.done:
                raise SessionError("session is complete")
            if not session.steps:
                raise SessionError("cannot submit with zero steps")
            target = session.target()
            accuracy = session.steps[-1].canvas == target
            trial_id = session.trial_id
            index = session.trial_index
            self._emit(
                session,
                "submitted",
                {"index": index, "trial": trial_id, "accuracy": accuracy},
            )
            if session.done:
                self._emit(session, "session_ended", {})
                return accuracy, session.points, None
            next_index = index + 1
            next_id = session.corpus.patterns[next_index][0]
            self._emit(session, "trial_started", {"index": next_index, "trial": next_id})
            return accuracy, session.points, next_id

    def submit_gallery(self, session_id: str, name: str | None = None) -> None:
        session, lock = self._get(session_id)
        with lock:
            self._emit(session, "gallery_submitted", {"name": name})

    def export_log(self, session_id: str) -> str:
        session, lock = self._get(session_id)
        with lock:
            return "".join(event.to_line() + "\n" for event in session.events)

    def close(self) -> None:
        with self._registry_lock:
            for fh in self._files.values():
                fh.flush()
                fh.close()
            self._files.clear()
