"""REST + WebSocket service exposing sessions, rounds, guesses, and events."""

from .app import FRAME_MEDIA_TYPES, create_app, frame_to_guess, serve
from .config import ENV_PREFIX, ServiceConfig, load_service_config
from .schemas import (
    RESPONSE_SCHEMAS,
    CreateSessionIn,
    GuessIn,
    LEADERBOARD_SCHEMA,
    REVEAL_SCHEMA,
    ROUND_SCHEMA,
    SESSION_DETAIL_SCHEMA,
    SESSION_SCHEMA,
    WS_EVENT_SCHEMA,
)

__all__ = [
    "CreateSessionIn",
    "ENV_PREFIX",
    "FRAME_MEDIA_TYPES",
    "GuessIn",
    "LEADERBOARD_SCHEMA",
    "RESPONSE_SCHEMAS",
    "REVEAL_SCHEMA",
    "ROUND_SCHEMA",
    "SESSION_DETAIL_SCHEMA",
    "SESSION_SCHEMA",
    "ServiceConfig",
    "WS_EVENT_SCHEMA",
    "create_app",
    "frame_to_guess",
    "load_service_config",
    "serve",
]
