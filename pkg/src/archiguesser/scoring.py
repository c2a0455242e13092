"""Turns a guess against a round's ground truth into points.

Component maxima: geography 5000, style 2500, time 2500 (total 10000).
Geography and time decay exponentially with error; style is tiered
(exact / near-miss / zero). Constants are fixed here and documented in the
README so scores are comparable across deployments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .catalog import Catalog, GeoCoord, YearInterval
from .errors import ModeMismatchError, ValidationError

EARTH_RADIUS_KM = 6371.0

GEO_MAX = 5000.0
GEO_DECAY_KM = 2000.0
STYLE_MAX = 2500.0
STYLE_NEAR_MISS = 1000.0
SIGHTS_SLOT_MAX = 1250.0
SIGHTS_SLOT_NEAR_MISS = 500.0
TIME_MAX = 2500.0
TIME_DECAY_YEARS = 300.0

SLIDER_YEAR_MIN = -3500
SLIDER_YEAR_MAX = 2025


class GameMode(str, enum.Enum):
    Image = "Image"
    Sights = "Sights"
    Poem = "Poem"


@dataclass(frozen=True)
class RoundSpec:
    mode: GameMode
    truth_style_id: str
    truth_coord: GeoCoord
    truth_period: YearInterval
    landmark_id: str | None = None
    fusion_style_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", GameMode(self.mode))
        if self.mode is GameMode.Sights:
            if not (self.landmark_id and self.fusion_style_id):
                raise ValidationError("Sights rounds need landmark_id and fusion_style_id")
            if self.fusion_style_id == self.truth_style_id:
                raise ValidationError("fusion style must differ from the native style")
        else:
            if self.landmark_id or self.fusion_style_id:
                raise ValidationError(f"{self.mode.value} rounds carry no landmark/fusion fields")


@dataclass(frozen=True)
class Guess:
    """A player's submission. In Sights mode style_ids is [original, fused]."""

    style_ids: tuple[str, ...]
    coord: GeoCoord
    year: int
    submitted_at: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "style_ids", tuple(self.style_ids))
        if not 1 <= len(self.style_ids) <= 2:
            raise ValidationError("a guess names 1 or 2 styles")
        if not SLIDER_YEAR_MIN <= self.year <= SLIDER_YEAR_MAX:
            raise ValidationError(
                f"year {self.year} outside slider range {SLIDER_YEAR_MIN}..{SLIDER_YEAR_MAX}"
            )
        if self.year == 0:
            raise ValidationError("year 0 does not exist; use -1 for 1 BCE")


@dataclass(frozen=True)
class Score:
    style_points: float
    geo_points: float
    time_points: float
    total: float
    distance_km: float
    year_delta: int

    def __post_init__(self):
        expected = self.style_points + self.geo_points + self.time_points
        if not math.isclose(self.total, expected, rel_tol=0, abs_tol=1e-9):
            raise ValidationError("score total must equal the sum of its components")
        if self.total > 10000.0 + 1e-9:
            raise ValidationError("score total exceeds 10000")


def haversine_km(a: GeoCoord, b: GeoCoord) -> float:
    """Great-circle distance on a sphere of radius 6371 km.

    The root argument is clamped to [0, 1] so antipodal points cannot
    produce a domain error from rounding.
    """
    lat1, lon1 = math.radians(a.lat), math.radians(a.lon)
    lat2, lon2 = math.radians(b.lat), math.radians(b.lon)
    s_lat = math.sin((lat2 - lat1) / 2.0)
    s_lon = math.sin((lon2 - lon1) / 2.0)
    h = s_lat * s_lat + math.cos(lat1) * math.cos(lat2) * s_lon * s_lon
    h = min(1.0, max(0.0, h))
    return 2.0 * EARTH_RADIUS_KM * math.asin(math.sqrt(h))


def geo_points(distance_km: float) -> float:
    return GEO_MAX * math.exp(-distance_km / GEO_DECAY_KM)


def year_gap(a: int, b: int) -> int:
    """Calendar years between two signed years, skipping the nonexistent year 0."""
    gap = abs(a - b)
    if (a < 0 < b) or (b < 0 < a):
        gap -= 1
    return gap


def period_delta(year: int, period: YearInterval) -> int:
    """0 inside the interval, else years to the nearer endpoint."""
    if period.contains(year):
        return 0
    endpoint = period.start if year < period.start else period.end
    return year_gap(year, endpoint)


def time_points(year: int, truth_period: YearInterval) -> float:
    return TIME_MAX * math.exp(-period_delta(year, truth_period) / TIME_DECAY_YEARS)


def _slot_points(guessed_id: str, truth_id: str, catalog: Catalog,
                 exact: float, near: float) -> float:
    if guessed_id == truth_id:
        return exact
    try:
        guessed = catalog.style_by_id(guessed_id)
        truth = catalog.style_by_id(truth_id)
    except Exception:
        return 0.0
    if guessed.region_id == truth.region_id and guessed.period.overlaps(truth.period):
        return near
    return 0.0


def style_points(guessed_ids: tuple[str, ...], spec: RoundSpec, catalog: Catalog) -> float:
    """Image/Poem: one slot worth 2500. Sights: original + fused slots, 1250 each."""
    if spec.mode is GameMode.Sights:
        total = _slot_points(guessed_ids[0], spec.truth_style_id, catalog,
                             SIGHTS_SLOT_MAX, SIGHTS_SLOT_NEAR_MISS)
        if len(guessed_ids) == 2:
            total += _slot_points(guessed_ids[1], spec.fusion_style_id, catalog,
                                  SIGHTS_SLOT_MAX, SIGHTS_SLOT_NEAR_MISS)
        return total
    return _slot_points(guessed_ids[0], spec.truth_style_id, catalog,
                        STYLE_MAX, STYLE_NEAR_MISS)


def score_guess(guess: Guess, spec: RoundSpec, catalog: Catalog) -> Score:
    """Compose the three component scores for one guess."""
    if len(guess.style_ids) == 2 and spec.mode is not GameMode.Sights:
        raise ModeMismatchError(f"two style tokens are only valid in Sights mode, not {spec.mode.value}")
    distance = haversine_km(guess.coord, spec.truth_coord)
    delta = period_delta(guess.year, spec.truth_period)
    s = style_points(guess.style_ids, spec, catalog)
    g = geo_points(distance)
    t = time_points(guess.year, spec.truth_period)
    return Score(
        style_points=s,
        geo_points=g,
        time_points=t,
        total=s + g + t,
        distance_km=distance,
        year_delta=delta,
    )
