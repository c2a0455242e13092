"""Game engine: sessions, rounds, event log, leaderboard."""

from .engine import (
    EngineConfig,
    GameEngine,
    GameSession,
    Player,
    RevealPayload,
    RoundPhase,
    RoundState,
    TickClock,
)
from .events import WS_EVENT_KINDS, Event, EventLog, verify_phase_monotonic
from .leaderboard import LeaderboardEntry, LeaderboardStore, rebuild_leaderboard

__all__ = [
    "EngineConfig",
    "Event",
    "EventLog",
    "GameEngine",
    "GameSession",
    "LeaderboardEntry",
    "LeaderboardStore",
    "Player",
    "RevealPayload",
    "RoundPhase",
    "RoundState",
    "TickClock",
    "WS_EVENT_KINDS",
    "rebuild_leaderboard",
    "verify_phase_monotonic",
]
