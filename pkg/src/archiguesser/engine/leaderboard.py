"""Global leaderboard: per-player revealed-round totals across sessions."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .events import Event, EventLog


@dataclass(frozen=True)
class LeaderboardEntry:
    player_id: str
    display_name: str
    total_points: float
    rounds_played: int
    last_update: float


class LeaderboardStore:
    """Accumulates reveal results; top() returns an immutable snapshot.

    Ordering: total desc, then earlier last_update (the player who reached
    the score first ranks higher), then player_id.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._rows: dict[str, dict] = {}

    def apply(self, player_id: str, display_name: str, points: float, ts: float) -> None:
        with self._lock:
            row = self._rows.setdefault(
                player_id,
                {"display_name": display_name, "total": 0.0, "rounds": 0, "last": ts},
            )
            row["display_name"] = display_name
            row["total"] += points
            row["rounds"] += 1
            row["last"] = ts

    def top(self, n: int | None = None) -> list[LeaderboardEntry]:
        with self._lock:
            entries = [
                LeaderboardEntry(
                    player_id=pid,
                    display_name=row["display_name"],
                    total_points=row["total"],
                    rounds_played=row["rounds"],
                    last_update=row["last"],
                )
                for pid, row in self._rows.items()
            ]
        entries.sort(key=lambda e: (-e.total_points, e.last_update, e.player_id))
        return entries if n is None else entries[:n]


def rebuild_leaderboard(log: EventLog) -> LeaderboardStore:
    """Replay revealed events into a fresh store (crash recovery)."""
    store = LeaderboardStore()
    for event in log.events():
        if event.kind != "revealed":
            continue
        _apply_reveal(store, event)
    return store


def _apply_reveal(store: LeaderboardStore, event: Event) -> None:
    for player_id, row in sorted(event.payload.get("scores", {}).items()):
        store.apply(player_id, row["display_name"], float(row["total"]), event.ts)
