"""One-shot board reading: detect markers, calibrate, map tokens and slider.

The optional catalog argument lets callers fold binding knowledge in: token
ids the catalog does not bind are reported in `unmatched` instead of being
silently dropped, matching what the game service needs when it converts a
reading into a guess.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..catalog import Catalog, GeoCoord
from ..errors import OutsideBoardError
from .detector import detect_markers
from .dictionary import MarkerDictionary
from .geometry import (
    CORNER_IDS,
    SLIDER_ID,
    BoardSpec,
    calibrate_board,
    pixel_to_geo,
    slider_to_year,
)


@dataclass(frozen=True)
class BoardReading:
    tokens: tuple[tuple[int, GeoCoord], ...]
    slider_year: int | None
    unmatched: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "unmatched", tuple(self.unmatched))


def read_board(image: np.ndarray, dictionary: MarkerDictionary,
               board_spec: BoardSpec, catalog: Catalog | None = None) -> BoardReading:
    """Detect everything in the frame and express it in game terms.

    Raises MissingCornersError when any of the four reserved corner markers
    is absent (including the no-markers-at-all case).
    """
    detections = detect_markers(image, dictionary)
    calibration = calibrate_board(detections, board_spec)

    tokens: list[tuple[int, GeoCoord]] = []
    unmatched: list[int] = []
    slider_year: int | None = None
    for det in detections:
        if det.marker_id in CORNER_IDS:
            continue
        if det.marker_id == SLIDER_ID:
            slider_year = slider_to_year(calibration, det)
            continue
        if catalog is not None and det.marker_id not in catalog.token_bindings:
            unmatched.append(det.marker_id)
            continue
        try:
            coord = pixel_to_geo(calibration, det.center)
        except OutsideBoardError:
            unmatched.append(det.marker_id)
            continue
        tokens.append((det.marker_id, coord))

    return BoardReading(
        tokens=tuple(tokens),
        slider_year=slider_year,
        unmatched=tuple(sorted(unmatched)),
    )
