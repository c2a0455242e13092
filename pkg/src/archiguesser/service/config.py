"""Service configuration with CLI > env (ARCHIGUESSER_*) > file > defaults."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping

from ..errors import ParseError, ValidationError

ENV_PREFIX = "ARCHIGUESSER_"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8420
    catalog_path: str | None = None       # None = the catalog shipped in the package
    assets_dir: str = "archiguesser-data/assets"
    log_path: str = "archiguesser-data/events.jsonl"
    gen_backend: str = "mock"
    deterministic: bool = False
    deadline_seconds: float = 120.0
    max_rounds: int = 10
    board_spec_path: str | None = None    # None = the built-in 1000x500 board
    ui_dir: str | None = None             # serve /ui/ from here when it exists

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValidationError(f"port {self.port} out of range")
        if self.max_rounds < 1:
            raise ValidationError("max_rounds must be >= 1")
        if self.deadline_seconds <= 0:
            raise ValidationError("deadline_seconds must be positive")


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off", ""}


def _coerce(name: str, kind: type, value):
    if value is None or isinstance(value, kind):
        return value
    if kind is bool:
        text = str(value).strip().lower()
        if text in _BOOL_TRUE:
            return True
        if text in _BOOL_FALSE:
            return False
        raise ParseError(f"config {name}: cannot read {value!r} as a boolean")
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"config {name}: {exc}") from None


_FIELD_TYPES = {
    "host": str, "port": int, "catalog_path": str, "assets_dir": str,
    "log_path": str, "gen_backend": str, "deterministic": bool,
    "deadline_seconds": float, "max_rounds": int, "board_spec_path": str,
    "ui_dir": str,
}


def load_service_config(
    file_path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
    cli: Mapping[str, object] | None = None,
) -> ServiceConfig:
    """Merge the three override layers onto the dataclass defaults.

    `cli` entries with value None are treated as "flag not given".
    """
    env = os.environ if env is None else env
    values: dict = {}
    if file_path is not None:
        try:
            doc = json.loads(Path(file_path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ParseError(f"cannot read config file {file_path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"config file {file_path}: {exc}") from None
        for f in fields(ServiceConfig):
            if f.name in doc:
                values[f.name] = doc[f.name]
    for f in fields(ServiceConfig):
        env_name = ENV_PREFIX + f.name.upper()
        if env_name in env:
            values[f.name] = env[env_name]
    for key, value in (cli or {}).items():
        if value is not None:
            if key not in _FIELD_TYPES:
                raise ValidationError(f"unknown config key {key!r}")
            values[key] = value
    coerced = {k: _coerce(k, _FIELD_TYPES[k], v) for k, v in values.items()}
    return ServiceConfig(**coerced)
