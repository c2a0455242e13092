"""Request models and response JSON Schemas for the HTTP surface.

Inputs are pydantic models; every 2xx response body has a JSON Schema in
RESPONSE_SCHEMAS so tests (and docs/api.md) can pin the wire format.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class PlayerIn(BaseModel):
    player_id: str
    display_name: str


class CreateSessionIn(BaseModel):
    mode: str
    players: list[PlayerIn] = Field(default_factory=list)
    seed: int | None = None


class CoordIn(BaseModel):
    lat: float
    lon: float


class GuessIn(BaseModel):
    player_id: str
    style_ids: list[str]
    coord: CoordIn
    year: int


_COORD = {
    "type": "object",
    "required": ["lat", "lon"],
    "properties": {"lat": {"type": "number"}, "lon": {"type": "number"}},
}

_PERIOD = {
    "type": "object",
    "required": ["start", "end"],
    "properties": {"start": {"type": "integer"}, "end": {"type": "integer"}},
}

_SCORE = {
    "type": "object",
    "required": ["style_points", "geo_points", "time_points", "total",
                 "distance_km", "year_delta"],
    "properties": {
        "style_points": {"type": "number"},
        "geo_points": {"type": "number"},
        "time_points": {"type": "number"},
        "total": {"type": "number"},
        "distance_km": {"type": "number"},
        "year_delta": {"type": "integer"},
    },
}

_GUESS = {
    "type": "object",
    "required": ["style_ids", "coord", "year"],
    "properties": {
        "style_ids": {"type": "array", "items": {"type": "string"},
                      "minItems": 1, "maxItems": 2},
        "coord": _COORD,
        "year": {"type": "integer"},
    },
}

_STYLE = {
    "type": "object",
    "required": ["style_id", "name", "region_id", "period", "origin",
                 "characteristics", "architects", "summary"],
    "properties": {
        "style_id": {"type": "string"},
        "name": {"type": "string"},
        "region_id": {"type": "string"},
        "period": _PERIOD,
        "origin": _COORD,
        "characteristics": {"type": "array", "items": {"type": "string"}},
        "architects": {"type": "array", "items": {"type": "string"}},
        "summary": {"type": "string"},
    },
}

SESSION_SCHEMA = {
    "type": "object",
    "required": ["session_id", "mode", "seed", "players"],
    "properties": {
        "session_id": {"type": "string"},
        "mode": {"enum": ["Image", "Sights", "Poem"]},
        "seed": {"type": "integer"},
        "players": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["player_id", "display_name"],
                "properties": {
                    "player_id": {"type": "string"},
                    "display_name": {"type": "string"},
                },
            },
        },
    },
}

SESSION_DETAIL_SCHEMA = {
    "type": "object",
    "required": ["session_id", "mode", "seed", "players", "rounds"],
    "properties": {
        **SESSION_SCHEMA["properties"],
        "rounds": {"type": "array", "items": {"$ref": "#/$defs/round"}},
    },
    "$defs": {"round": None},  # filled below once ROUND_SCHEMA exists
}

ROUND_SCHEMA = {
    "type": "object",
    "required": ["index", "phase", "mode", "asset_key", "media_type"],
    "properties": {
        "index": {"type": "integer", "minimum": 0},
        "phase": {"enum": ["Created", "AssetReady", "Presented", "Scored", "Revealed"]},
        "mode": {"enum": ["Image", "Sights", "Poem"]},
        "asset_key": {"type": ["string", "null"]},
        "media_type": {"type": ["string", "null"]},
        "presented_at": {"type": ["number", "null"]},
        "deadline": {"type": ["number", "null"]},
        "guessed_players": {"type": "array", "items": {"type": "string"}},
    },
}

SESSION_DETAIL_SCHEMA["$defs"]["round"] = ROUND_SCHEMA

GUESS_RESPONSE_SCHEMA = {
    "type": "object",
    "required": ["player_id", "guess", "score"],
    "properties": {
        "player_id": {"type": "string"},
        "guess": _GUESS,
        "score": _SCORE,
    },
}

REVEAL_SCHEMA = {
    "type": "object",
    "required": ["round", "style", "truth_coord", "truth_period", "scores"],
    "properties": {
        "round": {"type": "integer"},
        "style": _STYLE,
        "truth_coord": _COORD,
        "truth_period": _PERIOD,
        "scores": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["display_name", "total"],
                "properties": {
                    "display_name": {"type": "string"},
                    **_SCORE["properties"],
                },
            },
        },
        "landmark": {
            "type": ["object", "null"],
            "properties": {
                "landmark_id": {"type": "string"},
                "name": {"type": "string"},
                "coord": _COORD,
            },
        },
        "fusion_style": {"oneOf": [{"type": "null"}, _STYLE]},
        "poem_text": {"type": ["string", "null"]},
    },
}

LEADERBOARD_SCHEMA = {
    "type": "object",
    "required": ["entries"],
    "properties": {
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["player_id", "display_name", "total_points",
                             "rounds_played", "last_update"],
                "properties": {
                    "player_id": {"type": "string"},
                    "display_name": {"type": "string"},
                    "total_points": {"type": "number"},
                    "rounds_played": {"type": "integer"},
                    "last_update": {"type": "number"},
                },
            },
        }
    },
}

WS_EVENT_SCHEMA = {
    "type": "object",
    "required": ["cursor", "ts", "kind", "payload"],
    "properties": {
        "cursor": {"type": "integer", "minimum": 1},
        "ts": {"type": "number"},
        "kind": {"enum": ["round_started", "asset_ready", "guess_received",
                           "round_scored", "revealed"]},
        "payload": {"type": "object"},
    },
}

# Tray listing: identity only, no summaries (those are reveal material).
STYLES_SCHEMA = {
    "type": "object",
    "required": ["styles"],
    "properties": {
        "styles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["style_id", "name", "region_id", "period"],
                "properties": {
                    "style_id": {"type": "string"},
                    "name": {"type": "string"},
                    "region_id": {"type": "string"},
                    "period": _PERIOD,
                },
            },
        }
    },
}

RESPONSE_SCHEMAS = {
    "session": SESSION_SCHEMA,
    "session_detail": SESSION_DETAIL_SCHEMA,
    "round": ROUND_SCHEMA,
    "guess_response": GUESS_RESPONSE_SCHEMA,
    "reveal": REVEAL_SCHEMA,
    "leaderboard": LEADERBOARD_SCHEMA,
    "ws_event": WS_EVENT_SCHEMA,
    "styles": STYLES_SCHEMA,
}
