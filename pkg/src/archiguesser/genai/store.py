"""Content-addressed asset store: one file per asset plus a .meta sidecar."""

from __future__ import annotations

import json
import os
import time
from pathlib import Path
from typing import Callable

from ..errors import CacheError, NotFoundError
from .requests import AssetRecord, GenKind


class AssetStore:
    """Directory of `<key>` payload files with `<key>.meta` JSON sidecars.

    Writes go through a temp file and os.replace, so concurrent writers of
    the same key converge on one complete record and readers never see a
    torn file.
    """

    def __init__(self, root: str | Path, clock: Callable[[], float] = time.time):
        self.root = Path(root)
        self._clock = clock
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CacheError(f"cannot create asset store at {self.root}: {exc}") from exc

    def _payload_path(self, key: str) -> Path:
        return self.root / key

    def _meta_path(self, key: str) -> Path:
        return self.root / f"{key}.meta"

    def contains(self, key: str) -> bool:
        return self._payload_path(key).exists() and self._meta_path(key).exists()

    def put(self, key: str, kind: GenKind, media_type: str, data: bytes) -> AssetRecord:
        created_at = self._clock()
        meta = {
            "kind": GenKind(kind).value,
            "media_type": media_type,
            "created_at": created_at,
        }
        try:
            self._atomic_write(self._payload_path(key), data)
            self._atomic_write(
                self._meta_path(key),
                json.dumps(meta, sort_keys=True).encode("utf-8"),
            )
        except OSError as exc:
            raise CacheError(f"cannot store asset {key}: {exc}") from exc
        return AssetRecord(key=key, kind=kind, media_type=media_type, data=data, created_at=created_at)

    def _atomic_write(self, path: Path, data: bytes) -> None:
        tmp = path.with_name(path.name + f".tmp{os.getpid()}")
        tmp.write_bytes(data)
        os.replace(tmp, path)

    def fetch(self, key: str) -> AssetRecord:
        meta_path = self._meta_path(key)
        payload_path = self._payload_path(key)
        if not (meta_path.exists() and payload_path.exists()):
            raise NotFoundError(f"no asset with key {key}")
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            data = payload_path.read_bytes()
            return AssetRecord(
                key=key,
                kind=GenKind(meta["kind"]),
                media_type=meta["media_type"],
                data=data,
                created_at=float(meta["created_at"]),
            )
        except OSError as exc:
            raise CacheError(f"cannot read asset {key}: {exc}") from exc
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CacheError(f"asset {key} has corrupt metadata: {exc}") from exc

    def purge(self, older_than: float) -> int:
        """Remove assets created strictly before `older_than`; return the count."""
        removed = 0
        for meta_path in sorted(self.root.glob("*.meta")):
            key = meta_path.name[: -len(".meta")]
            try:
                meta = json.loads(meta_path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError):
                continue
            if float(meta.get("created_at", 0.0)) < older_than:
                try:
                    self._payload_path(key).unlink(missing_ok=True)
                    meta_path.unlink(missing_ok=True)
                except OSError as exc:
                    raise CacheError(f"cannot purge asset {key}: {exc}") from exc
                removed += 1
        return removed

    def keys(self) -> list[str]:
        return sorted(p.name[: -len(".meta")] for p in self.root.glob("*.meta"))
