"""Scoring oracle values and properties: haversine against analytic and
independent formulations, exponential decay constants, tiered style points,
and the no-year-zero gap rule."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from archiguesser.catalog import GeoCoord, YearInterval
from archiguesser.errors import ModeMismatchError, ValidationError
from archiguesser.scoring import (
    EARTH_RADIUS_KM,
    GameMode,
    Guess,
    RoundSpec,
    Score,
    geo_points,
    haversine_km,
    period_delta,
    score_guess,
    style_points,
    time_points,
    year_gap,
)

PARIS = GeoCoord(48.8566, 2.3522)
BERLIN = GeoCoord(52.52, 13.405)

years = st.integers(-3500, 2025).filter(lambda y: y != 0)
lats = st.floats(-90, 90, allow_nan=False)
lons = st.floats(-180, 179.999, allow_nan=False)


def law_of_cosines_km(a: GeoCoord, b: GeoCoord) -> float:
    """Independent great-circle formulation for cross-checking."""
    p1, p2 = math.radians(a.lat), math.radians(b.lat)
    dl = math.radians(b.lon - a.lon)
    c = math.sin(p1) * math.sin(p2) + math.cos(p1) * math.cos(p2) * math.cos(dl)
    return EARTH_RADIUS_KM * math.acos(min(1.0, max(-1.0, c)))


# -- haversine ----------------------------------------------------------------

def test_antipodal_is_half_circumference():
    d = haversine_km(GeoCoord(0, 0), GeoCoord(0, 180))
    assert abs(d - math.pi * EARTH_RADIUS_KM) < 0.01
    assert abs(d - 20015.09) < 0.01


def test_paris_berlin_against_independent_oracle():
    d = haversine_km(PARIS, BERLIN)
    assert abs(d - law_of_cosines_km(PARIS, BERLIN)) < 0.5
    assert abs(d - 878.0) < 2.0


def test_zero_distance():
    assert haversine_km(PARIS, PARIS) == 0.0


def test_poles():
    d = haversine_km(GeoCoord(90, 0), GeoCoord(-90, 0))
    assert abs(d - math.pi * EARTH_RADIUS_KM) < 1e-6


@given(lats, lons, lats, lons)
def test_haversine_symmetric_bounded(lat1, lon1, lat2, lon2):
    a, b = GeoCoord(lat1, lon1), GeoCoord(lat2, lon2)
    d = haversine_km(a, b)
    assert d == haversine_km(b, a)
    assert 0.0 <= d <= math.pi * EARTH_RADIUS_KM + 1e-9


# -- decay curves ---------------------------------------------------------------

def test_geo_points_anchor_values():
    assert geo_points(0.0) == 5000.0
    assert abs(geo_points(2000.0 * math.log(2)) - 2500.0) < 0.01
    assert abs(geo_points(20015.0) - 0.226) < 0.01


def test_time_points_anchor_values():
    period = YearInterval(1000, 1200)
    assert time_points(1100, period) == 2500.0
    assert abs(time_points(1500, period) - 2500.0 / math.e) < 0.01
    assert abs(time_points(1500, period) - 919.70) < 0.01


def test_geo_monotone_decreasing():
    samples = [geo_points(d) for d in range(0, 20001, 100)]
    assert all(a > b for a, b in zip(samples, samples[1:]))


@given(st.integers(1201, 2025), st.integers(0, 800))
def test_time_monotone_in_gap(year, shift):
    period = YearInterval(1000, 1200)
    further = min(year + shift, 2025)
    assert time_points(year, period) >= time_points(further, period)


# -- year arithmetic -------------------------------------------------------------

def test_bce_gap_skips_year_zero():
    assert year_gap(1, -1) == 1
    assert year_gap(-1, 1) == 1
    assert year_gap(100, -100) == 199
    assert year_gap(50, 50) == 0
    assert year_gap(-50, -30) == 20


def test_period_delta_zero_inside():
    period = YearInterval(-27, 476)
    assert period_delta(-27, period) == 0
    assert period_delta(100, period) == 0
    assert period_delta(476, period) == 0
    assert period_delta(500, period) == 24
    assert period_delta(-100, period) == 73
    # Crossing the missing year 0: 1 BCE is adjacent to 1 CE.
    assert period_delta(-1, YearInterval(1, 100)) == 1


# -- style points -----------------------------------------------------------------

def image_spec(catalog, style):
    return RoundSpec(
        mode=GameMode.Image,
        truth_style_id=style.id,
        truth_coord=style.origin,
        truth_period=style.period,
    )


def test_style_exact_near_wrong(catalog):
    truth = catalog.styles[0]
    spec = image_spec(catalog, truth)
    assert style_points((truth.id,), spec, catalog) == 2500.0

    near = next(
        s for s in catalog.styles
        if s.id != truth.id and s.region_id == truth.region_id
        and s.period.overlaps(truth.period)
    )
    assert style_points((near.id,), spec, catalog) == 1000.0

    wrong = next(s for s in catalog.styles if s.region_id != truth.region_id)
    assert style_points((wrong.id,), spec, catalog) == 0.0
    assert style_points(("not-a-style",), spec, catalog) == 0.0


def test_sights_slots(catalog):
    truth = catalog.styles[0]
    fusion = next(s for s in catalog.styles if s.region_id != truth.region_id)
    spec = RoundSpec(
        mode=GameMode.Sights,
        truth_style_id=truth.id,
        truth_coord=truth.origin,
        truth_period=truth.period,
        landmark_id="lm",
        fusion_style_id=fusion.id,
    )
    assert style_points((truth.id, fusion.id), spec, catalog) == 2500.0
    assert style_points((truth.id,), spec, catalog) == 1250.0
    assert style_points((fusion.id, truth.id), spec, catalog) == 0.0


def test_sights_round_spec_validation():
    coord = GeoCoord(0, 0)
    period = YearInterval(1, 100)
    with pytest.raises(ValidationError):
        RoundSpec(GameMode.Sights, "a", coord, period)  # missing landmark/fusion
    with pytest.raises(ValidationError):
        RoundSpec(GameMode.Sights, "a", coord, period, landmark_id="l", fusion_style_id="a")
    with pytest.raises(ValidationError):
        RoundSpec(GameMode.Image, "a", coord, period, fusion_style_id="b")


# -- composition -------------------------------------------------------------------

def test_perfect_guess_is_10000(catalog):
    truth = catalog.styles[0]
    spec = image_spec(catalog, truth)
    guess = Guess(
        style_ids=(truth.id,),
        coord=truth.origin,
        year=truth.period.start,
    )
    score = score_guess(guess, spec, catalog)
    assert score.total == 10000.0
    assert score.style_points == 2500.0
    assert score.geo_points == 5000.0
    assert score.time_points == 2500.0
    assert score.distance_km == 0.0
    assert score.year_delta == 0


def test_component_sum_example(catalog):
    truth = catalog.styles[0]
    spec = image_spec(catalog, truth)
    # Perfect style/time at half-life distance: 2500 + 2500 + 2500. Moving
    # along the meridian makes the great-circle distance exactly R * dphi.
    d_half = 2000.0 * math.log(2)
    dphi = math.degrees(d_half / EARTH_RADIUS_KM)
    lat = truth.origin.lat
    shifted = GeoCoord(lat - dphi if lat > 70 else lat + dphi, truth.origin.lon)
    guess = Guess(style_ids=(truth.id,), coord=shifted, year=truth.period.start)
    score = score_guess(guess, spec, catalog)
    assert abs(score.total - 7500.0) < 0.01


def test_two_styles_outside_sights_rejected(catalog):
    truth = catalog.styles[0]
    spec = image_spec(catalog, truth)
    guess = Guess(style_ids=(truth.id, truth.id), coord=truth.origin, year=100)
    with pytest.raises(ModeMismatchError):
        score_guess(guess, spec, catalog)


def test_guess_validation():
    with pytest.raises(ValidationError):
        Guess(style_ids=(), coord=GeoCoord(0, 0), year=100)
    with pytest.raises(ValidationError):
        Guess(style_ids=("a", "b", "c"), coord=GeoCoord(0, 0), year=100)
    with pytest.raises(ValidationError):
        Guess(style_ids=("a",), coord=GeoCoord(0, 0), year=0)
    with pytest.raises(ValidationError):
        Guess(style_ids=("a",), coord=GeoCoord(0, 0), year=99999)


def test_score_consistency_enforced():
    with pytest.raises(ValidationError):
        Score(style_points=1, geo_points=1, time_points=1, total=5,
              distance_km=0, year_delta=0)
    with pytest.raises(ValidationError):
        Score(style_points=9000, geo_points=9000, time_points=0, total=18000,
              distance_km=0, year_delta=0)


@given(years, years)
def test_score_monotone_in_distance_and_time(seed_year, guess_year):
    period = YearInterval(1000, 1200)
    t = time_points(guess_year, period)
    assert 0 <= t <= 2500.0
    gap = period_delta(guess_year, period)
    t2 = 2500.0 * math.exp(-gap / 300.0)
    assert math.isclose(t, t2, rel_tol=1e-12)
