"""Marker dictionary generation and persistence.

Codes are found by a seeded greedy search: propose random payloads, keep one
when every rotation stays at least min_distance bits from every kept code
(and from the proposal's own rotations, so orientation is never ambiguous).
The search is deterministic for a given (count, grid, min_distance, seed).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ExhaustedError, ParseError, ValidationError
from .bits import hamming, rotations, self_rotation_distance

PROPOSAL_BUDGET = 1_000_000


@dataclass(frozen=True)
class MarkerDictionary:
    grid: int
    codes: tuple[int, ...]
    min_distance: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "codes", tuple(int(c) for c in self.codes))
        if self.grid < 2:
            raise ValidationError("grid must be at least 2 cells per side")
        if not self.codes:
            raise ValidationError("a dictionary holds at least one code")
        if self.min_distance < 1:
            raise ValidationError("min_distance must be positive")
        top = 1 << (self.grid * self.grid)
        for i, c in enumerate(self.codes):
            if not 0 <= c < top:
                raise ValidationError(f"code {i} out of range for grid {self.grid}")

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def correction_capacity(self) -> int:
        return (self.min_distance - 1) // 2


def generate_dictionary(count: int, grid: int = 5, min_distance: int = 7,
                        seed: int = 0) -> MarkerDictionary:
    """Greedy seeded search for `count` codes with pairwise-rotation distance
    >= min_distance. Raises ExhaustedError when the proposal budget runs out
    (immediately when min_distance exceeds the payload size, which no code
    can ever satisfy)."""
    if count < 1:
        raise ValidationError("count must be at least 1")
    bits = grid * grid
    if min_distance > bits:
        raise ExhaustedError(
            f"min_distance {min_distance} exceeds the {bits}-bit payload; "
            "no proposal can ever qualify"
        )
    rng = random.Random(seed)
    accepted: list[int] = []
    accepted_rotations: list[int] = []
    proposals = 0
    while len(accepted) < count:
        if proposals >= PROPOSAL_BUDGET:
            raise ExhaustedError(
                f"found {len(accepted)}/{count} codes after {PROPOSAL_BUDGET} proposals "
                f"(grid={grid}, min_distance={min_distance}, seed={seed})"
            )
        proposals += 1
        cand = rng.getrandbits(bits)
        if self_rotation_distance(cand, grid) < min_distance:
            continue
        cand_rots = rotations(cand, grid)
        ok = True
        for known in accepted_rotations:
            if hamming(cand, known) < min_distance:
                ok = False
                break
        if not ok:
            continue
        accepted.append(cand)
        accepted_rotations.extend(cand_rots)
    return MarkerDictionary(grid=grid, codes=tuple(accepted),
                            min_distance=min_distance, seed=seed)


def save_dictionary(dictionary: MarkerDictionary, path: str | Path) -> None:
    payload = {
        "grid": dictionary.grid,
        "min_distance": dictionary.min_distance,
        "seed": dictionary.seed,
        "codes": list(dictionary.codes),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_dictionary(path: str | Path) -> MarkerDictionary:
    raw = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid dictionary JSON: {exc}") from exc
    try:
        return MarkerDictionary(
            grid=int(data["grid"]),
            codes=tuple(int(c) for c in data["codes"]),
            min_distance=int(data["min_distance"]),
            seed=int(data["seed"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: dictionary file missing field: {exc}") from exc
