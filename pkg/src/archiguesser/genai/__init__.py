"""Generative backends behind one interface, plus the content-addressed cache."""

from .requests import AssetRecord, GenKind, GenRequest, canonical_request_string, request_key
from .store import AssetStore
from .mock import MockImageBackend, MockSpeechBackend, MockTextBackend, MockBackendRouter
from .service import GenerationService, get_backend, register_backend

__all__ = [
    "AssetRecord",
    "AssetStore",
    "GenKind",
    "GenRequest",
    "GenerationService",
    "MockBackendRouter",
    "MockImageBackend",
    "MockSpeechBackend",
    "MockTextBackend",
    "canonical_request_string",
    "get_backend",
    "register_backend",
    "request_key",
]
