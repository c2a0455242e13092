"""Name canonicalization used by consistency selection and poem validation.

Folding is deliberately conservative: case, Unicode normal form, punctuation
and whitespace only. Diacritics are kept so genuinely distinct styles are not
merged.
"""

from __future__ import annotations

import unicodedata

__all__ = ["canonical_name", "canonical_compact", "squash"]


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def canonical_name(name: str) -> str:
    """Fold a style name for comparison.

    Lowercase, NFC-normalize, replace punctuation with spaces, collapse runs
    of whitespace, trim. "Art-Deco" and "  art   deco " both become
    "art deco".
    """
    s = unicodedata.normalize("NFC", name).lower()
    s = "".join(" " if _is_punct(ch) else ch for ch in s)
    return " ".join(s.split())


def canonical_compact(name: str) -> str:
    """Like canonical_name but punctuation is deleted instead of spaced.

    "Goth-ic" becomes "gothic" while genuine word boundaries survive, so a
    substring check against this folding catches punctuation-split names
    without matching across unrelated words.
    """
    s = unicodedata.normalize("NFC", name).lower()
    s = "".join("" if _is_punct(ch) else ch for ch in s)
    return " ".join(s.split())


def squash(canonical: str) -> str:
    """Remove spaces from an already canonical string."""
    return canonical.replace(" ", "")
