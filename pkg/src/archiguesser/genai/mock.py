"""Deterministic mock backends.

Each mock is a pure function of the request: the request's content address
seeds everything, so two fresh backend instances produce byte-identical
payloads for the same request. That keeps the whole game reproducible
without third-party accounts.
"""

from __future__ import annotations

import io
import json
import math
import random
import struct
import wave

from PIL import Image, ImageDraw

from ..errors import BackendError
from .requests import GenKind, GenRequest, request_key

# Neutral architectural vocabulary. Deliberately excludes style names so a
# mock poem cannot trip the style-name validator by accident.
_WORDS = [
    "stone", "light", "arch", "shadow", "column", "window", "stair", "vault",
    "garden", "tower", "brick", "timber", "court", "roofline", "threshold",
    "lattice", "marble", "dome", "gallery", "plinth", "cornice", "portal",
    "masonry", "skylight", "terrace", "facade", "pillar", "alcove",
]

_LINE_TEMPLATES = [
    "The {a} leans into {b},",
    "where {a} remembers {b}.",
    "A {a} of {b} holds the morning,",
    "and {a} answers {b} in kind.",
    "Under the {a}, a quiet {b},",
    "every {a} carved from patient {b}.",
    "Here the {a} gathers {b},",
    "till {a} and {b} become one wall.",
    "Climb the {a} past sleeping {b},",
    "count the {a} by its {b}.",
    "No name, only {a} and {b},",
    "a place the {a} keeps for {b}.",
]


def _rng_for(request: GenRequest) -> random.Random:
    return random.Random(int(request_key(request)[:16], 16))


class MockTextBackend:
    """Emits template-filled verse or JSON, seeded by the request hash."""

    def generate(self, request: GenRequest) -> tuple[bytes, str]:
        if request.kind is not GenKind.text:
            raise BackendError(f"text backend cannot serve kind {request.kind.value}")
        rng = _rng_for(request)
        lowered = request.prompt.lower()
        if "poem" in lowered:
            text = self._poem(rng)
        elif "json" in lowered:
            text = json.dumps(
                {
                    "prompt_sha256": request_key(request),
                    "words": rng.sample(_WORDS, 6),
                },
                sort_keys=True,
            )
        else:
            text = " ".join(rng.sample(_WORDS, 8)) + "."
        return text.encode("utf-8"), "text/plain; charset=utf-8"

    def _poem(self, rng: random.Random) -> str:
        n_lines = rng.randint(8, 12)
        lines = []
        for i in range(n_lines):
            template = _LINE_TEMPLATES[(i + rng.randrange(len(_LINE_TEMPLATES))) % len(_LINE_TEMPLATES)]
            a, b = rng.sample(_WORDS, 2)
            lines.append(template.format(a=a, b=b))
        return "\n".join(lines)


class MockImageBackend:
    """Renders a labeled placeholder PNG embedding the prompt hash."""

    size = (256, 192)

    def generate(self, request: GenRequest) -> tuple[bytes, str]:
        if request.kind not in (GenKind.image, GenKind.image_restyle):
            raise BackendError(f"image backend cannot serve kind {request.kind.value}")
        key = request_key(request)
        rng = _rng_for(request)
        w, h = self.size
        img = Image.new("RGB", (w, h), tuple(rng.randrange(40, 216) for _ in range(3)))
        draw = ImageDraw.Draw(img)
        # Blocky placeholder "skyline" derived from the hash.
        cols = 8
        col_w = w // cols
        for c in range(cols):
            height = rng.randrange(h // 5, (3 * h) // 4)
            color = tuple(rng.randrange(0, 256) for _ in range(3))
            draw.rectangle([c * col_w, h - height, (c + 1) * col_w - 2, h], fill=color)
        label = f"{request.kind.value} {key[:16]}"
        draw.rectangle([0, 0, w, 14], fill=(0, 0, 0))
        draw.text((4, 2), label, fill=(255, 255, 255))
        buf = io.BytesIO()
        img.save(buf, format="PNG")
        return buf.getvalue(), "image/png"


class MockSpeechBackend:
    """Emits a short mono WAV whose tone sequence is derived from the text hash."""

    sample_rate = 8000
    tone_seconds = 0.12

    def generate(self, request: GenRequest) -> tuple[bytes, str]:
        if request.kind is not GenKind.speech:
            raise BackendError(f"speech backend cannot serve kind {request.kind.value}")
        key = request_key(request)
        words = max(1, len(request.prompt.split()))
        n_tones = min(20, max(4, words // 4))
        freqs = [220.0 * (2.0 ** ((int(key[2 * i : 2 * i + 2], 16) % 25) / 12.0)) for i in range(n_tones)]
        samples_per_tone = int(self.sample_rate * self.tone_seconds)
        frames = bytearray()
        for f in freqs:
            for n in range(samples_per_tone):
                t = n / self.sample_rate
                envelope = min(1.0, 10.0 * t, 10.0 * (self.tone_seconds - t))
                value = int(12000 * envelope * math.sin(2 * math.pi * f * t))
                frames += struct.pack("<h", value)
        buf = io.BytesIO()
        with wave.open(buf, "wb") as wav:
            wav.setnchannels(1)
            wav.setsampwidth(2)
            wav.setframerate(self.sample_rate)
            wav.writeframes(bytes(frames))
        return buf.getvalue(), "audio/wav"


class MockBackendRouter:
    """Dispatches a request to the mock backend for its kind."""

    def __init__(self):
        self._text = MockTextBackend()
        self._image = MockImageBackend()
        self._speech = MockSpeechBackend()

    def generate(self, request: GenRequest) -> tuple[bytes, str]:
        if request.kind is GenKind.text:
            return self._text.generate(request)
        if request.kind in (GenKind.image, GenKind.image_restyle):
            return self._image.generate(request)
        return self._speech.generate(request)
