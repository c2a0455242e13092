"""Synthetic marker rendering.

Draws dictionary markers as flat rasters (for printing tokens) and warps them
onto larger canvases under a homography (for test scenes and board frames).
The warped path inverse-maps every output pixel and supersamples, so edges
are anti-aliased the way a slightly defocused camera would see them; corner
ground truth is therefore exact and sub-pixel refinement has a real gradient
to lock onto. The supersample count stays even so an edge crossing a pixel
center splits its subsamples evenly; odd grids put one subsample exactly on
the boundary and bias the rendered edge by a sixth of a pixel.
"""

from __future__ import annotations

import numpy as np

from ..errors import NotFoundError, ValidationError
from .bits import code_to_grid
from .dictionary import MarkerDictionary
from .geometry import fit_homography

Point = tuple[float, float]


def marker_cells(dictionary: MarkerDictionary, marker_id: int) -> np.ndarray:
    """(grid+2)x(grid+2) uint8 array, 1 = black, including the solid border."""
    if not 0 <= marker_id < len(dictionary.codes):
        raise NotFoundError(f"marker id {marker_id} not in dictionary of {len(dictionary.codes)}")
    g = dictionary.grid
    cells = np.ones((g + 2, g + 2), dtype=np.uint8)
    cells[1:-1, 1:-1] = code_to_grid(dictionary.codes[marker_id], g)
    return cells


def render_marker(dictionary: MarkerDictionary, marker_id: int, px: int = 200) -> np.ndarray:
    """px-by-px grayscale marker image with a one-cell white quiet zone.

    The cell size is the largest integer fitting (grid+4) cells into px; the
    marker block is centered and the remainder padded white, so cell
    boundaries always land on pixel boundaries.
    """
    g = dictionary.grid
    total_cells = g + 4
    if px < total_cells:
        raise ValidationError(f"px={px} too small for {total_cells} cells")
    cell_px = px // total_cells
    cells = marker_cells(dictionary, marker_id)
    block = np.kron(cells, np.ones((cell_px, cell_px), dtype=np.uint8))
    image = np.full((px, px), 255, dtype=np.uint8)
    offset = (px - (g + 2) * cell_px) // 2
    span = (g + 2) * cell_px
    image[offset:offset + span, offset:offset + span] = np.where(block == 1, 0, 255)
    return image


def rendered_marker_box(dictionary: MarkerDictionary, px: int = 200) -> tuple[Point, Point, Point, Point]:
    """Continuous-space corners [TL, BL, BR, TR] of the black border square in
    a render_marker image. A pixel covers [i-0.5, i+0.5), so the ink edge sits
    half a pixel outside the first black pixel index."""
    g = dictionary.grid
    cell_px = px // (g + 4)
    offset = (px - (g + 2) * cell_px) // 2
    lo = offset - 0.5
    hi = offset + (g + 2) * cell_px - 0.5
    return ((lo, lo), (lo, hi), (hi, hi), (hi, lo))


def render_marker_warped(canvas: np.ndarray, dictionary: MarkerDictionary,
                         marker_id: int, corners: tuple[Point, Point, Point, Point],
                         supersample: int = 4) -> None:
    """Draw a marker in place onto `canvas` (uint8 grayscale, white ground).

    `corners` are the continuous image positions of the black border square
    in canonical order [TL, BL, BR, TR] (counter-clockwise on screen with y
    down). White marker cells overwrite the canvas too, so markers sit on
    their own quiet zone wherever they land.
    """
    if canvas.ndim != 2 or canvas.dtype != np.uint8:
        raise ValidationError("canvas must be a 2-D uint8 array")
    g = dictionary.grid
    n = g + 2
    cells = marker_cells(dictionary, marker_id)
    pts = np.asarray(corners, dtype=np.float64)
    # Local marker frame in cell units, one extra quiet cell on each side.
    local = [(0.0, 0.0), (0.0, float(n)), (float(n), float(n)), (float(n), 0.0)]
    h_img_to_local = fit_homography([tuple(p) for p in pts], local)

    xmin = int(np.floor(pts[:, 0].min())) - 2
    xmax = int(np.ceil(pts[:, 0].max())) + 2
    ymin = int(np.floor(pts[:, 1].min())) - 2
    ymax = int(np.ceil(pts[:, 1].max())) + 2
    # Expand for the quiet zone: roughly one cell beyond the border.
    cell_px = max(1.0, np.sqrt(np.abs(_quad_area(pts))) / n)
    pad = int(np.ceil(cell_px)) + 2
    xmin, xmax = max(0, xmin - pad), min(canvas.shape[1] - 1, xmax + pad)
    ymin, ymax = max(0, ymin - pad), min(canvas.shape[0] - 1, ymax + pad)
    if xmin > xmax or ymin > ymax:
        return

    ss = max(1, supersample)
    hm = np.asarray(h_img_to_local, dtype=np.float64)

    def local_coords(px, py):
        denom = hm[2, 0] * px + hm[2, 1] * py + hm[2, 2]
        lx = (hm[0, 0] * px + hm[0, 1] * py + hm[0, 2]) / denom
        ly = (hm[1, 0] * px + hm[1, 1] * py + hm[1, 2]) / denom
        return lx, ly

    xs = np.arange(xmin, xmax + 1, dtype=np.float64)
    ys = np.arange(ymin, ymax + 1, dtype=np.float64)
    gx, gy = np.meshgrid(xs, ys)
    lx, ly = local_coords(gx, gy)
    inside_quiet = (lx >= -1.0) & (lx < n + 1.0) & (ly >= -1.0) & (ly < n + 1.0)
    inside_marker = (lx >= 0.0) & (lx < n) & (ly >= 0.0) & (ly < n)
    cic = np.clip(np.floor(lx), 0, n - 1).astype(np.intp)
    cir = np.clip(np.floor(ly), 0, n - 1).astype(np.intp)
    black = inside_marker & (cells[cir, cic] == 1)
    region = canvas[ymin:ymax + 1, xmin:xmax + 1].astype(np.float64)
    out = np.where(inside_quiet, np.where(black, 0.0, 255.0), region)

    # Only pixels within ~1.2 px of a cell boundary (or of the quiet-zone
    # rim) need anti-aliasing; everything else is constant under any
    # subsample pattern, so one sample was already exact.
    band = min(0.5, 1.2 / cell_px)
    fx = lx - np.floor(lx)
    fy = ly - np.floor(ly)
    near_zone = (lx >= -1.5) & (lx < n + 1.5) & (ly >= -1.5) & (ly < n + 1.5)
    near = near_zone & ((fx < band) | (fx > 1 - band) | (fy < band) | (fy > 1 - band))
    nyi, nxi = np.nonzero(near)
    if len(nyi):
        steps = (np.arange(ss, dtype=np.float64) + 0.5) / ss - 0.5
        sdx, sdy = np.meshgrid(steps, steps)
        sdx = sdx.ravel()[None, :]
        sdy = sdy.ravel()[None, :]
        px = gx[nyi, nxi][:, None] + sdx
        py = gy[nyi, nxi][:, None] + sdy
        slx, sly = local_coords(px, py)
        s_quiet = (slx >= -1.0) & (slx < n + 1.0) & (sly >= -1.0) & (sly < n + 1.0)
        s_marker = (slx >= 0.0) & (slx < n) & (sly >= 0.0) & (sly < n)
        scc = np.clip(np.floor(slx), 0, n - 1).astype(np.intp)
        scr = np.clip(np.floor(sly), 0, n - 1).astype(np.intp)
        s_black = s_marker & (cells[scr, scc] == 1)
        sample_vals = np.where(s_black, 0.0, 255.0)
        acc = (sample_vals * s_quiet).sum(axis=1)
        cover = s_quiet.sum(axis=1)
        total = ss * ss
        out[nyi, nxi] = (acc + region[nyi, nxi] * (total - cover)) / total
    canvas[ymin:ymax + 1, xmin:xmax + 1] = np.clip(np.rint(out), 0, 255).astype(np.uint8)


def _quad_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def add_gaussian_noise(image: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    noise = rng.standard_normal(size=image.shape, dtype=np.float32) * np.float32(sigma)
    return np.clip(np.rint(image.astype(np.float32) + noise), 0, 255).astype(np.uint8)
