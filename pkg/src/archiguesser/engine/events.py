"""Append-only JSONL event log with replay helpers.

One line per event: ``{"ts": ..., "session_id": ..., "kind": ..., "payload":
{...}}`` with sorted keys, so identical runs write identical bytes. The file
is the persistence layer: leaderboards and audit state rebuild by replay.
In-flight sessions are not resumed across restarts; the log records them for
audit and recovery of aggregate state.

Listeners registered with add_listener are called synchronously under the
log lock on every append; they must be fast and never raise.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from ..errors import ParseError

# Kinds pushed to websocket clients; the log itself also records
# session_created, presented, and round_aborted for audit.
WS_EVENT_KINDS = frozenset(
    {"round_started", "asset_ready", "guess_received", "round_scored", "revealed"}
)

_PHASE_BY_KIND = {
    "round_started": 0,   # Created
    "asset_ready": 1,
    "presented": 2,
    "round_scored": 3,
    "revealed": 4,
}


@dataclass(frozen=True)
class Event:
    ts: float
    session_id: str
    kind: str
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {"ts": self.ts, "session_id": self.session_id, "kind": self.kind,
             "payload": self.payload},
            sort_keys=True,
            ensure_ascii=False,
        )


def _event_from_line(line: str, lineno: int) -> Event:
    try:
        doc = json.loads(line)
        return Event(
            ts=float(doc["ts"]),
            session_id=str(doc["session_id"]),
            kind=str(doc["kind"]),
            payload=dict(doc["payload"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"event log line {lineno}: {exc}") from None


class EventLog:
    """Thread-safe appender over one JSONL file (or memory when path=None)."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._events: list[Event] = []
        self._by_session: dict[str, list[Event]] = {}
        self._listeners: list[Callable[[Event], None]] = []
        if self._path is not None and self._path.exists():
            for i, line in enumerate(self._path.read_text(encoding="utf-8").splitlines(), 1):
                if line.strip():
                    self._remember(_event_from_line(line, i))

    def _remember(self, event: Event) -> None:
        self._events.append(event)
        self._by_session.setdefault(event.session_id, []).append(event)

    def append(self, ts: float, session_id: str, kind: str, payload: dict) -> Event:
        event = Event(ts=ts, session_id=session_id, kind=kind, payload=payload)
        with self._lock:
            self._remember(event)
            if self._path is not None:
                with open(self._path, "a", encoding="utf-8") as f:
                    f.write(event.to_json() + "\n")
            listeners = list(self._listeners)
        for fn in listeners:
            fn(event)
        return event

    def events(self) -> list[Event]:
        with self._lock:
            return list(self._events)

    def session_events(self, session_id: str) -> list[Event]:
        with self._lock:
            return list(self._by_session.get(session_id, ()))

    def add_listener(self, fn: Callable[[Event], None]) -> None:
        with self._lock:
            self._listeners.append(fn)

    def remove_listener(self, fn: Callable[[Event], None]) -> None:
        with self._lock:
            if fn in self._listeners:
                self._listeners.remove(fn)


def verify_phase_monotonic(events: Iterable[Event]) -> None:
    """Raise ParseError if any (session, round) phase sequence regresses."""
    last: dict[tuple[str, int], int] = {}
    for event in events:
        rank = _PHASE_BY_KIND.get(event.kind)
        if rank is None or "round" not in event.payload:
            continue
        key = (event.session_id, int(event.payload["round"]))
        if rank < last.get(key, -1):
            raise ParseError(
                f"phase regression for session {key[0]} round {key[1]}: "
                f"{event.kind} after rank {last[key]}"
            )
        last[key] = rank
