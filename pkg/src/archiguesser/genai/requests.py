"""Generation requests and the canonical content-address scheme.

A request's cache key is the SHA-256 of its canonical string:

    kind "\\n" prompt "\\n" base_asset_key_or_empty "\\n" k1=v1 ";" k2=v2 ...

with params sorted by key, encoded UTF-8. Two requests that differ only in
params insertion order therefore share one key.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

from ..errors import ValidationError


class GenKind(str, enum.Enum):
    text = "text"
    image = "image"
    image_restyle = "image_restyle"
    speech = "speech"


@dataclass(frozen=True)
class GenRequest:
    kind: GenKind
    prompt: str
    base_asset: str | None = None
    params: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        kind = GenKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not self.prompt:
            raise ValidationError("generation request needs a non-empty prompt")
        if (self.base_asset is not None) != (kind is GenKind.image_restyle):
            raise ValidationError(
                "base_asset is required for image_restyle requests and forbidden otherwise"
            )
        if isinstance(self.params, dict):
            object.__setattr__(self, "params", tuple(self.params.items()))
        for k, v in self.params:
            if not isinstance(k, str) or not isinstance(v, str):
                raise ValidationError("request params must map strings to strings")

    def with_params(self, **extra: str) -> "GenRequest":
        merged = dict(self.params)
        merged.update(extra)
        return GenRequest(self.kind, self.prompt, self.base_asset, tuple(merged.items()))


def canonical_request_string(request: GenRequest) -> str:
    params = ";".join(f"{k}={v}" for k, v in sorted(request.params))
    return "\n".join(
        [request.kind.value, request.prompt, request.base_asset or "", params]
    )


def request_key(request: GenRequest) -> str:
    """64-char lowercase hex content address of a request."""
    return hashlib.sha256(canonical_request_string(request).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class AssetRecord:
    key: str
    kind: GenKind
    media_type: str
    data: bytes = field(repr=False)
    created_at: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", GenKind(self.kind))
        if len(self.key) != 64 or any(c not in "0123456789abcdef" for c in self.key):
            raise ValidationError(f"asset key {self.key!r} is not 64-char lowercase hex")
        if not self.data:
            raise ValidationError("asset payload must be non-empty")
