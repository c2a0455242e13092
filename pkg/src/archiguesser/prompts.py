"""Prompt construction for the three content families, plus poem validation.

All functions are pure; validate_poem is the enforcement point for the
"never say the style's name" rule, using the same canonicalization as
consistency selection.
"""

from __future__ import annotations

from typing import Literal

from .catalog import Landmark, StyleRecord
from .errors import SameStyleError, ValidationError
from .genai import GenKind, GenRequest
from .textnorm import canonical_compact, canonical_name, squash

POEM_MIN_LINES = 8
POEM_MAX_LINES = 12


def build_image_prompt(
    style: StyleRecord,
    variant: Literal["template", "descriptor"] = "template",
    descriptor_text: str | None = None,
) -> str:
    """Image prompt for a style, either the fixed template or a descriptor list."""
    if variant == "template":
        if style.architects:
            return f"Building of {style.name} architectural style by {style.architects[0]}"
        return f"Building of {style.name} architectural style"
    if variant == "descriptor":
        if not descriptor_text:
            raise ValidationError("descriptor variant requires descriptor_text")
        return f"Building, {descriptor_text}"
    raise ValidationError(f"unknown image prompt variant {variant!r}")


def build_descriptor_prompt(style: StyleRecord) -> str:
    """Ask a text model to compress a style into nouns and adjectives."""
    return (
        f"Summarize the {style.name} architectural style using only nouns and "
        "adjectives, as a comma-separated list."
    )


def build_sights_request(landmark: Landmark, target_style: StyleRecord) -> GenRequest:
    """Restyle request: re-render a landmark photo in a foreign style."""
    if target_style.id == landmark.native_style_id:
        raise SameStyleError(
            f"landmark {landmark.id!r} is already {target_style.id!r}; pick a different target"
        )
    return GenRequest(
        kind=GenKind.image_restyle,
        prompt=f"Reinterpret in {target_style.name} architectural style",
        base_asset=landmark.source_image,
    )


def build_poem_prompt(style: StyleRecord, landmark: Landmark | None = None) -> str:
    """Poem prompt evoking the style's characteristics without naming it."""
    traits = "; ".join(style.characteristics)
    parts = [
        f"Write a poem of {POEM_MIN_LINES} to {POEM_MAX_LINES} short lines evoking an "
        f"architectural style with these characteristics: {traits}.",
    ]
    if landmark is not None:
        parts.append(f"Let the poem dwell on {landmark.name}.")
    parts.append(
        f'Do not mention the style name "{style.name}" or any variant of it anywhere in the poem.'
    )
    return " ".join(parts)


def validate_poem(poem: str, style: StyleRecord) -> bool:
    """True iff the poem never names the style.

    Checks the canonical folding of the poem for the canonical style name,
    plus a punctuation-deleting fold so splits like "Goth-ic" cannot hide
    the name. Callers regenerate on False (bounded retries).
    """
    name = canonical_name(style.name)
    if not name:
        return True
    if name in canonical_name(poem):
        return False
    if squash(name) in canonical_compact(poem):
        return False
    return True
