"""Marker detection in grayscale frames.

Pipeline: adaptive threshold (local mean minus offset), connected-component
border following, polygon simplification to convex quads, perspective unwarp
and cell majority sampling, black-border check, dictionary match under four
rotations with bounded error correction, overlap dedup, and sub-pixel corner
refinement by gradient line fits along the quad edges.

Coordinates are (x, y) pixels, x right, y down. A reported rotation r means
the marker appears turned r * 90 degrees counter-clockwise on screen relative
to its canonical orientation; corners are always ordered starting at the
canonical marker's top-left, counter-clockwise on screen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import ImageFormatError, ValidationError
from .bits import grid_to_code, hamming, rotate_code
from .dictionary import MarkerDictionary
from .geometry import fit_homography

MIN_QUAD_AREA = 100.0
ASPECT_RANGE = (0.3, 3.0)

# Cheap component prefilters; every survivor still has to pass the contrast,
# border, and dictionary gates, so these only have to be safe, not tight.
_MIN_COMPONENT_PIXELS = 36
_MIN_BBOX_SIDE = 8

# A real marker spans nearly the full dynamic range between its black border
# and the white quiet zone; candidates whose sampled cells are this flat are
# texture, not markers.
_MIN_CELL_CONTRAST = 40.0

_EPS_SWEEP = (0.02, 0.04, 0.06, 0.09)

# 8-neighborhood in clockwise screen order starting at west, as (dx, dy).
_NEIGHBORS = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_NEIGHBOR_INDEX = {d: i for i, d in enumerate(_NEIGHBORS)}


@dataclass(frozen=True)
class MarkerDetection:
    marker_id: int
    rotation: int
    corners: tuple[tuple[float, float], tuple[float, float],
                   tuple[float, float], tuple[float, float]]
    decode_errors: int

    def __post_init__(self):
        object.__setattr__(
            self, "corners",
            tuple((float(x), float(y)) for x, y in self.corners),
        )
        if len(self.corners) != 4:
            raise ValidationError("a detection has exactly 4 corners")
        if self.rotation not in (0, 1, 2, 3):
            raise ValidationError("rotation is one of 0..3")
        if self.decode_errors < 0:
            raise ValidationError("decode_errors cannot be negative")
        if not _is_convex(np.asarray(self.corners)):
            raise ValidationError("detection corners must form a convex quadrilateral")

    @property
    def center(self) -> tuple[float, float]:
        xs = sum(c[0] for c in self.corners) / 4.0
        ys = sum(c[1] for c in self.corners) / 4.0
        return (xs, ys)

    @property
    def area(self) -> float:
        return abs(_signed_area(np.asarray(self.corners)))


def _signed_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _is_convex(v: np.ndarray) -> bool:
    sign = 0
    for i in range(4):
        a = v[(i + 1) % 4] - v[i]
        b = v[(i + 2) % 4] - v[(i + 1) % 4]
        cross = a[0] * b[1] - a[1] * b[0]
        if abs(cross) < 1e-9:
            return False
        if sign == 0:
            sign = 1 if cross > 0 else -1
        elif (cross > 0) != (sign > 0):
            return False
    return True


def _trace_boundary(mask: np.ndarray) -> np.ndarray:
    """Moore border following (clockwise on screen) over a padded component
    mask. Returns the closed outer contour as an (n, 2) array of (x, y)."""
    ys, xs = np.nonzero(mask)
    first = np.lexsort((xs, ys))[0]
    start = (int(xs[first]), int(ys[first]))
    backtrack = (start[0] - 1, start[1])
    current = start
    contour = [start]
    second: tuple[int, int] | None = None
    limit = 8 * len(xs) + 64
    for _ in range(limit):
        bi = _NEIGHBOR_INDEX[(backtrack[0] - current[0], backtrack[1] - current[1])]
        nxt = None
        for step in range(1, 9):
            ni = (bi + step) % 8
            cand = (current[0] + _NEIGHBORS[ni][0], current[1] + _NEIGHBORS[ni][1])
            if mask[cand[1], cand[0]]:
                prev = (bi + step - 1) % 8
                backtrack = (current[0] + _NEIGHBORS[prev][0],
                             current[1] + _NEIGHBORS[prev][1])
                nxt = cand
                break
        if nxt is None:
            break  # isolated pixel, no neighbors
        if second is None:
            second = nxt
        elif current == start and nxt == second:
            break  # about to repeat the first transition: one full lap done
        current = nxt
        contour.append(current)
    if len(contour) > 1 and contour[-1] == contour[0]:
        contour.pop()
    return np.asarray(contour, dtype=np.float64)


def _douglas_peucker(points: np.ndarray, eps: float) -> np.ndarray:
    n = len(points)
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j <= i + 1:
            continue
        seg = points[j] - points[i]
        length = math.hypot(seg[0], seg[1])
        mid = points[i + 1:j]
        if length < 1e-12:
            dist = np.sqrt(((mid - points[i]) ** 2).sum(axis=1))
        else:
            dist = np.abs(seg[0] * (mid[:, 1] - points[i, 1])
                          - seg[1] * (mid[:, 0] - points[i, 0])) / length
        k = int(np.argmax(dist))
        if dist[k] > eps:
            keep[i + 1 + k] = True
            stack.append((i, i + 1 + k))
            stack.append((i + 1 + k, j))
    return np.flatnonzero(keep)


def _fit_quad(contour: np.ndarray) -> np.ndarray | None:
    """Simplify a closed contour to exactly 4 convex vertices, sweeping the
    tolerance upward; None when no sweep step yields a convex quad."""
    if len(contour) < 8:
        return None
    d0 = ((contour - contour[0]) ** 2).sum(axis=1)
    i0 = int(np.argmax(d0))
    d1 = ((contour - contour[i0]) ** 2).sum(axis=1)
    i1 = int(np.argmax(d1))
    if i0 == i1:
        return None
    lo, hi = sorted((i0, i1))
    arc_a = contour[lo:hi + 1]
    arc_b = np.vstack([contour[hi:], contour[:lo + 1]])
    closed = np.vstack([contour, contour[:1]])
    perimeter = float(np.sqrt(((closed[1:] - closed[:-1]) ** 2).sum(axis=1)).sum())
    for factor in _EPS_SWEEP:
        eps = factor * perimeter
        ka = _douglas_peucker(arc_a, eps)
        kb = _douglas_peucker(arc_b, eps)
        verts = np.vstack([arc_a[ka][:-1], arc_b[kb][:-1]])
        if len(verts) == 4 and _is_convex(verts):
            return verts
        if len(verts) < 4:
            return None
    return None


def _order_canonical_direction(quad: np.ndarray) -> np.ndarray:
    """Make the cyclic direction match [TL, BL, BR, TR] ordering, which has
    negative shoelace area with y pointing down."""
    if _signed_area(quad) > 0:
        return quad[[0, 3, 2, 1]]
    return quad


def _sample_cells(gray: np.ndarray, quad: np.ndarray, grid: int,
                  subsamples: int = 5) -> tuple[np.ndarray, float]:
    """Majority-sample each cell of the unwarped marker over the central 60%
    of its area. Cells are classified against the midpoint of the sampled
    intensity range (the adaptive threshold hollows out large solid regions,
    so the binarized image cannot be used here). Returns (black_cells bool
    (grid+2) square, contrast between the darkest and brightest cell)."""
    side = grid + 2
    local = [(0.0, 0.0), (0.0, float(side)), (float(side), float(side)), (float(side), 0.0)]
    h = fit_homography(local, [tuple(p) for p in quad])
    offs = 0.2 + 0.6 * (np.arange(subsamples) + 0.5) / subsamples
    positions = (np.arange(side)[:, None] + offs[None, :]).ravel()
    lx, ly = np.meshgrid(positions, positions)
    denom = h[2, 0] * lx + h[2, 1] * ly + h[2, 2]
    ix = (h[0, 0] * lx + h[0, 1] * ly + h[0, 2]) / denom
    iy = (h[1, 0] * lx + h[1, 1] * ly + h[1, 2]) / denom
    xi = np.clip(np.rint(ix), 0, gray.shape[1] - 1).astype(np.intp)
    yi = np.clip(np.rint(iy), 0, gray.shape[0] - 1).astype(np.intp)
    vals = gray[yi, xi].astype(np.float64)
    outside = ((ix < -0.5) | (ix > gray.shape[1] - 0.5)
               | (iy < -0.5) | (iy > gray.shape[0] - 0.5))
    vals[outside] = 255.0
    cell_means = vals.reshape(side, subsamples, side, subsamples).mean(axis=(1, 3))
    contrast = float(cell_means.max() - cell_means.min())
    threshold = (cell_means.max() + cell_means.min()) / 2.0
    dark = (vals < threshold).reshape(side, subsamples, side, subsamples)
    frac = dark.mean(axis=(1, 3))
    return frac > 0.5, contrast


def _match_code(observed: int, dictionary: MarkerDictionary) -> tuple[int, int, int] | None:
    """Best (errors, marker_id, code_rotation) within correction capacity.

    code_rotation r means observed == rot90^r(canonical) up to the errors;
    uniqueness inside the capacity follows from the dictionary distance
    guarantees, so the first minimum is the only one."""
    best: tuple[int, int, int] | None = None
    for r in range(4):
        derotated = rotate_code(observed, dictionary.grid, (4 - r) % 4)
        for marker_id, code in enumerate(dictionary.codes):
            err = hamming(derotated, code)
            if best is None or err < best[0]:
                best = (err, marker_id, r)
    if best is None or best[0] > dictionary.correction_capacity:
        return None
    return best


def _bilinear(img: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    h, w = img.shape
    x = np.clip(xs, 0.0, w - 1.001)
    y = np.clip(ys, 0.0, h - 1.001)
    x0 = np.floor(x).astype(np.intp)
    y0 = np.floor(y).astype(np.intp)
    fx = x - x0
    fy = y - y0
    top = img[y0, x0] * (1 - fx) + img[y0, x0 + 1] * fx
    bot = img[y0 + 1, x0] * (1 - fx) + img[y0 + 1, x0 + 1] * fx
    return top * (1 - fy) + bot * fy


def _refine_corners(gray: np.ndarray, quad: np.ndarray) -> np.ndarray:
    """Sub-pixel corners: locate the intensity edge along each side as the
    mid-value crossing of normal profiles (phase-robust for step edges), fit
    a line per side, intersect neighbors. Falls back to the coarse corner
    wherever the fit is unreliable."""
    lines: list[tuple[np.ndarray, np.ndarray] | None] = []
    for i in range(4):
        a, b = quad[i], quad[(i + 1) % 4]
        length = float(np.hypot(*(b - a)))
        if length < 12.0:
            lines.append(None)
            continue
        count = int(np.clip(length / 6.0, 8, 24))
        ts = np.linspace(0.18, 0.82, count)
        pts = a[None, :] + ts[:, None] * (b - a)[None, :]
        tangent = (b - a) / length
        normal = np.array([-tangent[1], tangent[0]])
        us = np.linspace(-2.5, 2.5, 11)
        px = pts[:, None, 0] + us[None, :] * normal[0]
        py = pts[:, None, 1] + us[None, :] * normal[1]
        profile = _bilinear(gray, px, py)
        vmin = profile.min(axis=1)
        vmax = profile.max(axis=1)
        mid = (vmin + vmax) / 2.0
        signed = profile - mid[:, None]
        u_star = np.full(count, np.nan)
        for k in range(count):
            if vmax[k] - vmin[k] < 60.0:
                continue
            s = signed[k]
            best = None
            for j in range(len(us) - 1):
                if s[j] == 0.0 and s[j + 1] == 0.0:
                    continue
                if s[j] * s[j + 1] <= 0.0:
                    u = us[j] + (us[j + 1] - us[j]) * s[j] / (s[j] - s[j + 1])
                    if best is None or abs(u) < abs(best):
                        best = u
            if best is not None:
                u_star[k] = best
        valid = np.isfinite(u_star) & (np.abs(u_star) <= 2.0)
        if valid.sum() < 4:
            lines.append(None)
            continue
        edge_pts = pts[valid] + u_star[valid, None] * normal[None, :]
        mean = edge_pts.mean(axis=0)
        centered = edge_pts - mean
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        lines.append((mean, vt[0]))

    refined = quad.copy()
    for i in range(4):
        incoming = lines[(i - 1) % 4]
        outgoing = lines[i]
        if incoming is None or outgoing is None:
            continue
        (p1, d1), (p2, d2) = incoming, outgoing
        det = d1[0] * -d2[1] + d2[0] * d1[1]
        if abs(det) < 1e-9:
            continue
        rhs = p2 - p1
        t = (rhs[0] * -d2[1] + d2[0] * rhs[1]) / det
        candidate = p1 + t * d1
        if float(np.hypot(*(candidate - quad[i]))) <= 3.0:
            refined[i] = candidate
    return refined


def detect_markers(image: np.ndarray, dictionary: MarkerDictionary,
                   window: int = 15, offset: float = 7.0,
                   refine: bool = True) -> list[MarkerDetection]:
    """Detect and decode every dictionary marker visible in a grayscale frame.

    Returns an empty list when nothing decodes; raises ImageFormatError for
    rasters that are not 2-D uint8 and ValidationError for frames smaller
    than 64x64.
    """
    arr = np.asarray(image)
    if arr.ndim != 2 or arr.dtype != np.uint8:
        raise ImageFormatError("detect_markers expects a 2-D uint8 grayscale array")
    if arr.shape[0] < 64 or arr.shape[1] < 64:
        raise ValidationError(f"frame {arr.shape[1]}x{arr.shape[0]} below the 64x64 minimum")

    gray = arr.astype(np.float32)
    local_mean = ndimage.uniform_filter(gray, size=window, mode="reflect")
    ink = gray < (local_mean - offset)

    labels, count = ndimage.label(ink, structure=np.ones((3, 3), dtype=np.uint8))
    if count == 0:
        return []
    # Group ink pixels by label once; per-label bounding boxes via reduceat
    # are far cheaper than find_objects scanning every tiny noise component.
    pix_y, pix_x = np.nonzero(ink)
    pix_label = labels[pix_y, pix_x]
    order = np.argsort(pix_label, kind="stable")
    sorted_label = pix_label[order]
    sorted_y = pix_y[order]
    sorted_x = pix_x[order]
    starts = np.r_[0, np.flatnonzero(np.diff(sorted_label)) + 1]
    component_sizes = np.diff(np.r_[starts, len(sorted_label)])
    x0s = np.minimum.reduceat(sorted_x, starts)
    x1s = np.maximum.reduceat(sorted_x, starts)
    y0s = np.minimum.reduceat(sorted_y, starts)
    y1s = np.maximum.reduceat(sorted_y, starts)

    found: list[tuple[MarkerDetection, float]] = []
    for k in range(len(starts)):
        if component_sizes[k] < _MIN_COMPONENT_PIXELS:
            continue
        x0, x1, y0, y1 = int(x0s[k]), int(x1s[k]), int(y0s[k]), int(y1s[k])
        height = y1 - y0 + 1
        width = x1 - x0 + 1
        if height < _MIN_BBOX_SIDE or width < _MIN_BBOX_SIDE:
            continue
        idx = int(sorted_label[starts[k]])
        mask = np.zeros((height + 2, width + 2), dtype=bool)
        mask[1:-1, 1:-1] = labels[y0:y1 + 1, x0:x1 + 1] == idx
        contour = _trace_boundary(mask)
        if len(contour) < 8:
            continue
        contour += np.array([x0 - 1, y0 - 1], dtype=np.float64)
        quad = _fit_quad(contour)
        if quad is None:
            continue
        area = abs(_signed_area(quad))
        if area < MIN_QUAD_AREA:
            continue
        sides = np.sqrt(((np.roll(quad, -1, axis=0) - quad) ** 2).sum(axis=1))
        aspect = (sides[0] + sides[2]) / max(sides[1] + sides[3], 1e-9)
        if not ASPECT_RANGE[0] <= aspect <= ASPECT_RANGE[1]:
            continue
        quad = _order_canonical_direction(quad)

        black, contrast = _sample_cells(gray, quad, dictionary.grid)
        if contrast < _MIN_CELL_CONTRAST:
            continue
        if not (black[0].all() and black[-1].all()
                and black[:, 0].all() and black[:, -1].all()):
            continue
        observed = grid_to_code(black[1:-1, 1:-1])
        match = _match_code(observed, dictionary)
        if match is None:
            continue
        errors, marker_id, code_rotation = match

        if refine:
            quad = _refine_corners(gray, quad)
            if not _is_convex(quad):
                continue
        ordered = np.array([quad[(i + code_rotation) % 4] for i in range(4)])
        # Screen-space orientation: where the canonical top edge points.
        top = ordered[3] - ordered[0]
        theta = math.atan2(top[1], top[0])
        rotation = int(round(-theta / (math.pi / 2.0))) % 4
        detection = MarkerDetection(
            marker_id=marker_id,
            rotation=rotation,
            corners=tuple((float(p[0]), float(p[1])) for p in ordered),
            decode_errors=errors,
        )
        found.append((detection, area))

    return _dedup(found)


def _dedup(found: list[tuple[MarkerDetection, float]]) -> list[MarkerDetection]:
    """Drop overlapping detections, keeping the lower-error (then larger) one."""
    ranked = sorted(found, key=lambda fa: (fa[0].decode_errors, -fa[1]))
    kept: list[tuple[MarkerDetection, float]] = []
    for det, area in ranked:
        cx, cy = det.center
        duplicate = False
        for other, other_area in kept:
            ox, oy = other.center
            radius = 0.6 * math.sqrt(min(area, other_area))
            if math.hypot(cx - ox, cy - oy) < radius:
                duplicate = True
                break
        if not duplicate:
            kept.append((det, area))
    result = [d for d, _ in kept]
    result.sort(key=lambda d: (d.marker_id, d.center))
    return result
