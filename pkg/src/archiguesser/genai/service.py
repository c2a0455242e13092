"""Cache-fronted generation plus the backend registry.

`ARCHIGUESSER_GEN_BACKEND=mock|live` selects the backend; `live` resolves to
whatever a deployment registered via register_backend("live", factory). The
game never requires a live backend.
"""

from __future__ import annotations

import os
import time
from typing import Callable, Protocol

from ..errors import BackendError
from .mock import MockBackendRouter
from .requests import AssetRecord, GenRequest, request_key
from .store import AssetStore


class Backend(Protocol):
    def generate(self, request: GenRequest) -> tuple[bytes, str]: ...


_REGISTRY: dict[str, Callable[[], Backend]] = {}


def register_backend(name: str, factory: Callable[[], Backend]) -> None:
    _REGISTRY[name] = factory


def _unconfigured_live() -> Backend:
    raise BackendError(
        "live backend selected but none registered; call "
        "archiguesser.genai.register_backend('live', factory) first"
    )


register_backend("mock", MockBackendRouter)
register_backend("live", _unconfigured_live)


def get_backend(name: str | None = None) -> Backend:
    chosen = name or os.environ.get("ARCHIGUESSER_GEN_BACKEND", "mock")
    try:
        factory = _REGISTRY[chosen]
    except KeyError:
        raise BackendError(f"unknown generation backend {chosen!r}") from None
    return factory()


class GenerationService:
    """generate() with content-addressed caching over any Backend."""

    def __init__(self, store: AssetStore, backend: Backend, retries: int = 2,
                 backoff: float = 0.0):
        self.store = store
        self.backend = backend
        self.retries = retries
        self.backoff = backoff

    def generate(self, request: GenRequest) -> AssetRecord:
        key = request_key(request)
        if self.store.contains(key):
            return self.store.fetch(key)
        last_error: BackendError | None = None
        for attempt in range(self.retries + 1):
            try:
                data, media_type = self.backend.generate(request)
                break
            except BackendError as exc:
                last_error = exc
                if attempt < self.retries and self.backoff:
                    time.sleep(self.backoff * (attempt + 1))
        else:
            raise BackendError(f"backend failed after {self.retries + 1} attempts: {last_error}")
        return self.store.put(key, request.kind, media_type, data)

    def fetch_asset(self, key: str) -> AssetRecord:
        return self.store.fetch(key)

    def purge_cache(self, older_than: float) -> int:
        return self.store.purge(older_than)
