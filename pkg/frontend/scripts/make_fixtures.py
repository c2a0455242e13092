"""Regenerate tests/fixtures/server_golden.json from the game server's own
board math. Run from the repository root with the Python package installed:

    python3 frontend/scripts/make_fixtures.py

The client's geo and slider conversions are pinned against these values, so
the fixture must only ever be rebuilt from the server code, never by hand.
"""

import json
from pathlib import Path

import numpy as np

from archiguesser.vision.detector import MarkerDetection
from archiguesser.vision.geometry import (
    BoardCalibration,
    default_board_spec,
    pixel_to_geo,
    slider_to_year,
)

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "server_golden.json"

GEO_POINTS = [
    (0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0),
    (0.5, 0.5), (0.25, 0.25), (0.75, 0.25),
    (0.137, 0.844), (0.8615, 0.1165), (0.33325, 0.5),
]

SLIDER_FRACTIONS = [
    0.0, 1.0, 0.5, 0.25, 0.75, 0.1, 0.9,
    3500 / 5525,  # the year-0 crossing, snapped to -1
    0.63348, 0.6335, 0.99999, 1e-9,
]


def slider_detection(center):
    cx, cy = center
    corners = ((cx - 5, cy - 5), (cx - 5, cy + 5), (cx + 5, cy + 5), (cx + 5, cy - 5))
    return MarkerDetection(marker_id=4, rotation=0, corners=corners, decode_errors=0)


def main():
    spec = default_board_spec()
    # identity homography: fixture pixels ARE board units, so the fixture
    # isolates the projection formula from calibration error
    calibration = BoardCalibration(
        homography=np.eye(3),
        board_width=spec.width,
        board_height=spec.height,
        slider_axis=spec.slider_axis,
        slider_years=spec.slider_years,
        rms=0.0,
    )

    geo = []
    for fx, fy in GEO_POINTS:
        coord = pixel_to_geo(calibration, (fx * spec.width, fy * spec.height))
        geo.append({"fx": fx, "fy": fy, "lat": coord.lat, "lon": coord.lon})

    (ax, ay), (bx, by) = spec.slider_axis
    slider = []
    for f in SLIDER_FRACTIONS:
        center = (ax + f * (bx - ax), ay + f * (by - ay))
        slider.append({"fraction": f, "year": slider_to_year(calibration, slider_detection(center))})

    fixture = {
        "board": {
            "width": spec.width,
            "height": spec.height,
            "yearMin": spec.slider_years[0],
            "yearMax": spec.slider_years[1],
        },
        "geo": geo,
        "slider": slider,
    }
    OUT.write_text(json.dumps(fixture, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
