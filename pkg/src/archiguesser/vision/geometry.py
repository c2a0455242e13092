"""Planar geometry: homography estimation, board calibration, and the
mapping from board positions to geographic coordinates and slider years.

The board frame is a W x H rectangle in abstract board units with the map
filling it under an equirectangular projection: x grows eastward from
longitude -180, y grows southward from latitude +90. The slider axis may sit
outside the map rectangle (physically it is a strip next to the map).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np

from ..catalog import GeoCoord
from ..errors import (
    DegenerateError,
    MissingCornersError,
    NotSliderMarkerError,
    OutsideBoardError,
    ParseError,
    ValidationError,
)

if TYPE_CHECKING:
    from .detector import MarkerDetection

CORNER_IDS = (0, 1, 2, 3)
SLIDER_ID = 4

BOARD_EDGE_TOLERANCE = 0.5

Point = tuple[float, float]


def fit_homography(src: Sequence[Point], dst: Sequence[Point]) -> np.ndarray:
    """Normalized DLT. Needs >= 4 correspondences; with more it returns the
    least-squares solution. Raises DegenerateError on collinear/deficient input."""
    s = np.asarray(src, dtype=np.float64)
    d = np.asarray(dst, dtype=np.float64)
    if s.shape != d.shape or s.ndim != 2 or s.shape[1] != 2 or s.shape[0] < 4:
        raise DegenerateError("homography needs at least 4 point correspondences")

    def normalizer(pts: np.ndarray) -> np.ndarray:
        centroid = pts.mean(axis=0)
        dist = np.sqrt(((pts - centroid) ** 2).sum(axis=1)).mean()
        if dist < 1e-12:
            raise DegenerateError("correspondences are coincident")
        scale = math.sqrt(2.0) / dist
        return np.array([
            [scale, 0.0, -scale * centroid[0]],
            [0.0, scale, -scale * centroid[1]],
            [0.0, 0.0, 1.0],
        ])

    ts, td = normalizer(s), normalizer(d)
    sn = (ts @ np.c_[s, np.ones(len(s))].T).T
    dn = (td @ np.c_[d, np.ones(len(d))].T).T

    rows = []
    for (x, y, _), (u, v, _) in zip(sn, dn):
        rows.append([-x, -y, -1, 0, 0, 0, u * x, u * y, u])
        rows.append([0, 0, 0, -x, -y, -1, v * x, v * y, v])
    a = np.asarray(rows)
    _, sv, vt = np.linalg.svd(a)
    # Rank must be 8 for a unique (up to scale) solution.
    if sv[6] < 1e-9 * sv[0]:
        raise DegenerateError("correspondences are degenerate (collinear or repeated)")
    h = vt[-1].reshape(3, 3)
    h = np.linalg.inv(td) @ h @ ts
    if abs(h[2, 2]) > 1e-12:
        h = h / h[2, 2]
    if abs(np.linalg.det(h)) <= 1e-12:
        raise DegenerateError("estimated homography is singular")
    return h


def apply_homography(h: np.ndarray, points: np.ndarray | Sequence[Point]) -> np.ndarray:
    """Apply h to an (n,2) array of points (a single (2,) point also works)."""
    p = np.asarray(points, dtype=np.float64)
    single = p.ndim == 1
    if single:
        p = p[None, :]
    hom = np.c_[p, np.ones(len(p))] @ np.asarray(h, dtype=np.float64).T
    w = hom[:, 2]
    if np.any(np.abs(w) < 1e-12):
        raise DegenerateError("point maps to infinity under this homography")
    out = hom[:, :2] / w[:, None]
    return out[0] if single else out


@dataclass(frozen=True)
class BoardSpec:
    """Physical layout: where the reserved markers sit in board units."""

    width: float = 1000.0
    height: float = 500.0
    corner_positions: tuple[Point, Point, Point, Point] = (
        (0.0, 0.0), (1000.0, 0.0), (1000.0, 500.0), (0.0, 500.0),
    )
    slider_axis: tuple[Point, Point] = ((0.0, 560.0), (1000.0, 560.0))
    slider_years: tuple[int, int] = (-3500, 2025)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValidationError("board dimensions must be positive")
        if len(self.corner_positions) != 4:
            raise ValidationError("corner_positions maps exactly the 4 reserved ids 0-3")
        (ax, ay), (bx, by) = self.slider_axis
        if math.hypot(bx - ax, by - ay) < 1e-9:
            raise ValidationError("slider axis endpoints coincide")
        if self.slider_years[0] == self.slider_years[1]:
            raise ValidationError("slider year range is empty")


def default_board_spec() -> BoardSpec:
    return BoardSpec()


def save_board_spec(spec: BoardSpec, path: str | Path) -> None:
    payload = {
        "width": spec.width,
        "height": spec.height,
        "corner_positions": [list(p) for p in spec.corner_positions],
        "slider_axis": [list(p) for p in spec.slider_axis],
        "slider_years": list(spec.slider_years),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_board_spec(path: str | Path) -> BoardSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid board spec JSON: {exc}") from exc
    try:
        return BoardSpec(
            width=float(data["width"]),
            height=float(data["height"]),
            corner_positions=tuple(tuple(map(float, p)) for p in data["corner_positions"]),
            slider_axis=tuple(tuple(map(float, p)) for p in data["slider_axis"]),
            slider_years=tuple(int(y) for y in data["slider_years"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: board spec missing or malformed field: {exc}") from exc


@dataclass(frozen=True)
class BoardCalibration:
    homography: np.ndarray  # pixel -> board units, 3x3
    board_width: float
    board_height: float
    slider_axis: tuple[Point, Point]
    slider_years: tuple[int, int]
    rms: float  # reprojection RMS in pixels over the fitting correspondences

    def __post_init__(self):
        h = np.asarray(self.homography, dtype=np.float64)
        if h.shape != (3, 3):
            raise ValidationError("homography must be a 3x3 matrix")
        if abs(np.linalg.det(h)) <= 1e-12:
            raise DegenerateError("calibration homography is not invertible")
        if self.board_width <= 0 or self.board_height <= 0:
            raise ValidationError("board dimensions must be positive")
        object.__setattr__(self, "homography", h)


def calibrate_board(detections: Sequence["MarkerDetection"],
                    board_spec: BoardSpec) -> BoardCalibration:
    """Fit the pixel->board homography from the four reserved corner markers."""
    by_id = {}
    for det in detections:
        if det.marker_id in CORNER_IDS and det.marker_id not in by_id:
            by_id[det.marker_id] = det
    missing = [i for i in CORNER_IDS if i not in by_id]
    if missing:
        raise MissingCornersError(missing)
    pixel_pts = [by_id[i].center for i in CORNER_IDS]
    board_pts = [board_spec.corner_positions[i] for i in CORNER_IDS]
    h = fit_homography(pixel_pts, board_pts)
    # RMS is reported in pixels: push the board points back through the
    # inverse so the number is meaningful against the camera frame.
    back = apply_homography(np.linalg.inv(h), board_pts)
    err = np.asarray(pixel_pts) - back
    rms = float(np.sqrt((err ** 2).sum(axis=1).mean()))
    return BoardCalibration(
        homography=h,
        board_width=board_spec.width,
        board_height=board_spec.height,
        slider_axis=board_spec.slider_axis,
        slider_years=board_spec.slider_years,
        rms=rms,
    )


def pixel_to_geo(calibration: BoardCalibration, pixel: Point) -> GeoCoord:
    """Map an image pixel through the calibration homography onto the
    equirectangular board: lon = -180 + 360 x/W, lat = 90 - 180 y/H.
    Points within 0.5 board units outside the rectangle are clamped."""
    x, y = apply_homography(calibration.homography, np.asarray(pixel, dtype=np.float64))
    w, h = calibration.board_width, calibration.board_height
    if not (-BOARD_EDGE_TOLERANCE <= x <= w + BOARD_EDGE_TOLERANCE
            and -BOARD_EDGE_TOLERANCE <= y <= h + BOARD_EDGE_TOLERANCE):
        raise OutsideBoardError(
            f"board point ({x:.2f}, {y:.2f}) outside {w:.0f}x{h:.0f} rectangle"
        )
    x = min(max(x, 0.0), w)
    y = min(max(y, 0.0), h)
    lon = -180.0 + 360.0 * x / w
    lat = 90.0 - 180.0 * y / h
    return GeoCoord(lat=lat, lon=lon)


def _round_half_away(value: float) -> int:
    if value >= 0:
        return int(math.floor(value + 0.5))
    return int(math.ceil(value - 0.5))


def slider_to_year(calibration: BoardCalibration, detection: "MarkerDetection") -> int:
    """Project the slider marker center onto the slider axis; linear year map
    with round-half-away-from-zero, and 0 snapped to -1 (there is no year 0)."""
    if detection.marker_id != SLIDER_ID:
        raise NotSliderMarkerError(
            f"marker {detection.marker_id} is not the reserved slider id {SLIDER_ID}"
        )
    p = apply_homography(calibration.homography,
                         np.asarray(detection.center, dtype=np.float64))
    a = np.asarray(calibration.slider_axis[0], dtype=np.float64)
    b = np.asarray(calibration.slider_axis[1], dtype=np.float64)
    axis = b - a
    f = float(np.dot(p - a, axis) / np.dot(axis, axis))
    f = min(max(f, 0.0), 1.0)
    start, end = calibration.slider_years
    year = _round_half_away(start + f * (end - start))
    if year == 0:
        year = -1
    return year
