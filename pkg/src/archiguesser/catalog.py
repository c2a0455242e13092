"""Curated catalog of architectural styles, landmarks, and regions.

The catalog is one UTF-8 JSON document (top-level keys ``regions``,
``styles``, ``landmarks``, ``tokens``, ``version``) loaded into immutable
records. See docs/catalog-schema.md for the file format. After load the
catalog never mutates; lookups are safe from any thread.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import NotFoundError, ParseError, ValidationError

CATALOG_VERSION = "1"

YEAR_MIN = -5000
YEAR_MAX = 2100

_REGION_ID_RE = re.compile(r"^[a-z0-9-]+$")

# Marker ids 0-3 are board corners, 4 is the time slider; style tokens start at 5.
RESERVED_MARKER_IDS = frozenset(range(5))


@dataclass(frozen=True)
class GeoCoord:
    """A point on the globe. lat in [-90, 90], lon normalized to [-180, 180)."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValidationError(f"coordinate not finite: ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValidationError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 360.0:
            raise ValidationError(f"longitude out of range: {self.lon}")
        lon = self.lon
        if lon >= 180.0:
            lon -= 360.0
        object.__setattr__(self, "lon", lon + 0.0)
        object.__setattr__(self, "lat", self.lat + 0.0)


@dataclass(frozen=True)
class YearInterval:
    """Signed calendar years, no year 0 (1 BCE is -1)."""

    start: int
    end: int

    def __post_init__(self):
        if self.start == 0 or self.end == 0:
            raise ValidationError("year 0 does not exist; use -1 for 1 BCE")
        if self.start > self.end:
            raise ValidationError(f"inverted interval: {self.start}..{self.end}")
        for y in (self.start, self.end):
            if not YEAR_MIN <= y <= YEAR_MAX:
                raise ValidationError(f"year {y} outside [{YEAR_MIN}, {YEAR_MAX}]")

    def contains(self, year: int) -> bool:
        return self.start <= year <= self.end

    def overlaps(self, other: "YearInterval") -> bool:
        return self.start <= other.end and other.start <= self.end


@dataclass(frozen=True)
class Region:
    id: str
    display_name: str

    def __post_init__(self):
        if not self.id or not _REGION_ID_RE.match(self.id):
            raise ValidationError(
                f"region id {self.id!r} must be lowercase letters, digits, hyphens"
            )
        if not self.display_name:
            raise ValidationError(f"region {self.id!r} has empty display_name")


@dataclass(frozen=True)
class StyleRecord:
    id: str
    name: str
    region_id: str
    period: YearInterval
    characteristics: tuple[str, ...]
    architects: tuple[str, ...]
    origin: GeoCoord
    summary: str

    def __post_init__(self):
        if not self.id:
            raise ValidationError("style with empty id")
        if not self.name:
            raise ValidationError(f"style {self.id!r} has empty name")
        if not 1 <= len(self.characteristics) <= 10:
            raise ValidationError(
                f"style {self.id!r} needs 1..10 characteristics, got {len(self.characteristics)}"
            )
        if len(self.architects) > 10:
            raise ValidationError(f"style {self.id!r} lists more than 10 architects")


@dataclass(frozen=True)
class Landmark:
    id: str
    name: str
    coord: GeoCoord
    native_style_id: str
    source_image: str

    def __post_init__(self):
        if not self.id:
            raise ValidationError("landmark with empty id")


@dataclass(frozen=True)
class Catalog:
    """Immutable, validated catalog. Index maps are built once at load."""

    regions: tuple[Region, ...]
    styles: tuple[StyleRecord, ...]
    landmarks: tuple[Landmark, ...]
    tokens: tuple[tuple[int, str], ...]  # (marker_id, style_id), sorted by marker id
    version: str = CATALOG_VERSION
    _style_index: dict = field(default_factory=dict, repr=False, compare=False)
    _landmark_index: dict = field(default_factory=dict, repr=False, compare=False)
    _region_index: dict = field(default_factory=dict, repr=False, compare=False)
    _token_index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_region_index", {r.id: r for r in self.regions})
        object.__setattr__(self, "_style_index", {s.id: s for s in self.styles})
        object.__setattr__(self, "_landmark_index", {l.id: l for l in self.landmarks})
        object.__setattr__(self, "_token_index", dict(self.tokens))
        self._validate()

    def _validate(self):
        if not self.regions:
            raise ValidationError("at least one region required")
        if self.version != CATALOG_VERSION:
            raise ValidationError(
                f"unsupported catalog version {self.version!r}, expected {CATALOG_VERSION!r}"
            )
        for coll, index, what in (
            (self.regions, self._region_index, "region"),
            (self.styles, self._style_index, "style"),
            (self.landmarks, self._landmark_index, "landmark"),
        ):
            if len(index) != len(coll):
                seen = set()
                for item in coll:
                    if item.id in seen:
                        raise ValidationError(f"duplicate {what} id {item.id!r}")
                    seen.add(item.id)
        for s in self.styles:
            if s.region_id not in self._region_index:
                raise ValidationError(
                    f"style {s.id!r} references unknown region {s.region_id!r}"
                )
        for l in self.landmarks:
            if l.native_style_id not in self._style_index:
                raise ValidationError(
                    f"landmark {l.id!r} references unknown style {l.native_style_id!r}"
                )
        seen_markers = set()
        for marker_id, style_id in self.tokens:
            if marker_id in RESERVED_MARKER_IDS:
                raise ValidationError(
                    f"token binding uses reserved marker id {marker_id}"
                )
            if marker_id in seen_markers:
                raise ValidationError(f"duplicate token binding for marker {marker_id}")
            seen_markers.add(marker_id)
            if style_id not in self._style_index:
                raise ValidationError(
                    f"token for marker {marker_id} references unknown style {style_id!r}"
                )

    # -- lookups (case-sensitive; exact record or NotFoundError) --

    def style_by_id(self, style_id: str) -> StyleRecord:
        try:
            return self._style_index[style_id]
        except KeyError:
            raise NotFoundError(f"no style with id {style_id!r}") from None

    def landmark_by_id(self, landmark_id: str) -> Landmark:
        try:
            return self._landmark_index[landmark_id]
        except KeyError:
            raise NotFoundError(f"no landmark with id {landmark_id!r}") from None

    def region_by_id(self, region_id: str) -> Region:
        try:
            return self._region_index[region_id]
        except KeyError:
            raise NotFoundError(f"no region with id {region_id!r}") from None

    def style_for_marker(self, marker_id: int) -> StyleRecord | None:
        style_id = self._token_index.get(marker_id)
        return self._style_index[style_id] if style_id is not None else None

    @property
    def token_bindings(self) -> dict[int, str]:
        return dict(self._token_index)


# ---------------------------------------------------------------------------
# File I/O


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing required field {key!r}")
    return obj[key]


def _coord_from_json(obj, where: str) -> GeoCoord:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: coordinate must be an object with lat/lon")
    return GeoCoord(float(_require(obj, "lat", where)), float(_require(obj, "lon", where)))


def _style_from_json(obj: dict) -> StyleRecord:
    where = f"style {obj.get('id', '?')!r}"
    period = _require(obj, "period", where)
    try:
        interval = YearInterval(int(_require(period, "start", where)), int(_require(period, "end", where)))
        return StyleRecord(
            id=str(_require(obj, "id", where)),
            name=str(_require(obj, "name", where)),
            region_id=str(_require(obj, "region_id", where)),
            period=interval,
            characteristics=tuple(str(c) for c in _require(obj, "characteristics", where)),
            architects=tuple(str(a) for a in obj.get("architects", [])),
            origin=_coord_from_json(_require(obj, "origin", where), where),
            summary=str(obj.get("summary", "")),
        )
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def catalog_from_dict(doc: dict) -> Catalog:
    """Build and validate a Catalog from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise ParseError("catalog document must be a JSON object")
    regions = tuple(
        Region(str(_require(r, "id", "region")), str(_require(r, "display_name", "region")))
        for r in doc.get("regions", [])
    )
    styles = tuple(_style_from_json(s) for s in doc.get("styles", []))
    landmarks = []
    for l in doc.get("landmarks", []):
        where = f"landmark {l.get('id', '?')!r}"
        landmarks.append(
            Landmark(
                id=str(_require(l, "id", where)),
                name=str(_require(l, "name", where)),
                coord=_coord_from_json(_require(l, "coord", where), where),
                native_style_id=str(_require(l, "native_style_id", where)),
                source_image=str(_require(l, "source_image", where)),
            )
        )
    tokens = tuple(
        sorted((int(k), str(v)) for k, v in doc.get("tokens", {}).items())
    )
    return Catalog(
        regions=regions,
        styles=styles,
        landmarks=tuple(landmarks),
        tokens=tokens,
        version=str(doc.get("version", "")),
    )


def catalog_to_dict(catalog: Catalog) -> dict:
    return {
        "version": catalog.version,
        "regions": [{"id": r.id, "display_name": r.display_name} for r in catalog.regions],
        "styles": [
            {
                "id": s.id,
                "name": s.name,
                "region_id": s.region_id,
                "period": {"start": s.period.start, "end": s.period.end},
                "characteristics": list(s.characteristics),
                "architects": list(s.architects),
                "origin": {"lat": s.origin.lat, "lon": s.origin.lon},
                "summary": s.summary,
            }
            for s in catalog.styles
        ],
        "landmarks": [
            {
                "id": l.id,
                "name": l.name,
                "coord": {"lat": l.coord.lat, "lon": l.coord.lon},
                "native_style_id": l.native_style_id,
                "source_image": l.source_image,
            }
            for l in catalog.landmarks
        ],
        "tokens": {str(marker): style for marker, style in catalog.tokens},
    }


def load_catalog(path: str | Path) -> Catalog:
    """Load, parse, and validate a catalog file."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from None
    return catalog_from_dict(doc)


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    """Write a catalog as canonical JSON (stable key order, one trailing newline)."""
    text = json.dumps(catalog_to_dict(catalog), indent=2, sort_keys=True, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def default_catalog_path() -> Path:
    """Path of the catalog shipped with the package."""
    return Path(__file__).parent / "data" / "default_catalog.json"
