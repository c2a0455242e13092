// Board math shared with the game server. The map is the equirectangular
// board: lon = -180 + 360 x/W, lat = 90 - 180 y/H, with the antimeridian
// normalized to -180. The year slider is linear over -3500..2025 with
// round-half-away-from-zero and no year 0. Any change here must keep the
// golden fixtures in tests/fixtures/server_golden.json passing.

export const BOARD_WIDTH = 1000;
export const BOARD_HEIGHT = 500;
export const YEAR_MIN = -3500;
export const YEAR_MAX = 2025;

export interface GeoCoord {
  lat: number;
  lon: number;
}

function clamp01(v: number): number {
  return Math.min(Math.max(v, 0), 1);
}

/** Map-relative click position (fractions of the element's width/height,
    measured from the top-left corner) to a globe coordinate. */
export function fractionToGeo(fx: number, fy: number): GeoCoord {
  const x = clamp01(fx) * BOARD_WIDTH;
  const y = clamp01(fy) * BOARD_HEIGHT;
  let lon = -180 + (360 * x) / BOARD_WIDTH;
  const lat = 90 - (180 * y) / BOARD_HEIGHT;
  if (lon >= 180) lon -= 360;
  return { lat, lon };
}

/** Inverse of fractionToGeo, for placing truth markers on the map. */
export function geoToFraction(coord: GeoCoord): { fx: number; fy: number } {
  return {
    fx: clamp01((coord.lon + 180) / 360),
    fy: clamp01((90 - coord.lat) / 180),
  };
}

export function roundHalfAway(value: number): number {
  return value >= 0 ? Math.floor(value + 0.5) : Math.ceil(value - 0.5);
}

/** Slider fraction (0 = left end, 1 = right end) to a calendar year.
    Same expression the server evaluates, so ties round identically. */
export function fractionToYear(fraction: number): number {
  const f = clamp01(fraction);
  const year = roundHalfAway(YEAR_MIN + f * (YEAR_MAX - YEAR_MIN));
  return year === 0 ? -1 : year;
}

/** Where a year sits on the slider track. Inexact inverse (years are
    quantized); only used for display. */
export function yearToFraction(year: number): number {
  return clamp01((year - YEAR_MIN) / (YEAR_MAX - YEAR_MIN));
}

export function formatYear(year: number): string {
  return year < 0 ? `${-year} BCE` : `${year} CE`;
}

export function formatCoord(coord: GeoCoord): string {
  const ns = coord.lat >= 0 ? "N" : "S";
  const ew = coord.lon >= 0 ? "E" : "W";
  return `${Math.abs(coord.lat).toFixed(1)}°${ns} ${Math.abs(coord.lon).toFixed(1)}°${ew}`;
}
