"""From-scratch fiducial marker system: dictionary, detection, board geometry."""

from .bits import code_to_grid, grid_to_code, hamming, min_rotation_distance, rotate_code
from .board import BoardReading, read_board
from .detector import MarkerDetection, detect_markers
from .dictionary import MarkerDictionary, generate_dictionary, load_dictionary, save_dictionary
from .geometry import (
    CORNER_IDS,
    SLIDER_ID,
    BoardCalibration,
    BoardSpec,
    apply_homography,
    calibrate_board,
    default_board_spec,
    fit_homography,
    load_board_spec,
    pixel_to_geo,
    save_board_spec,
    slider_to_year,
)
from .image_io import decode_image_bytes, encode_image_bytes, load_image, save_image, to_gray
from .render import add_gaussian_noise, render_marker, render_marker_warped, rendered_marker_box

__all__ = [
    "BoardCalibration",
    "BoardReading",
    "BoardSpec",
    "CORNER_IDS",
    "MarkerDetection",
    "MarkerDictionary",
    "SLIDER_ID",
    "add_gaussian_noise",
    "apply_homography",
    "calibrate_board",
    "code_to_grid",
    "decode_image_bytes",
    "default_board_spec",
    "detect_markers",
    "encode_image_bytes",
    "fit_homography",
    "generate_dictionary",
    "grid_to_code",
    "hamming",
    "load_board_spec",
    "load_dictionary",
    "load_image",
    "min_rotation_distance",
    "pixel_to_geo",
    "read_board",
    "render_marker",
    "render_marker_warped",
    "rendered_marker_box",
    "rotate_code",
    "save_board_spec",
    "save_dictionary",
    "save_image",
    "slider_to_year",
    "to_gray",
]
