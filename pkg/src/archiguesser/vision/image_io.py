"""Raster input/output: binary PGM (P5) and PNG, always as 8-bit grayscale.

Color PNG input is converted with Rec. 601 luma. Anything else (16-bit PGM,
other PNM flavors, non-raster files) raises ImageFormatError.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import ImageFormatError


def to_gray(array: np.ndarray) -> np.ndarray:
    """Rec. 601 luma for HxWx3 (or x4, alpha ignored) uint8 arrays."""
    a = np.asarray(array)
    if a.ndim == 2:
        return a.astype(np.uint8, copy=False)
    if a.ndim == 3 and a.shape[2] in (3, 4):
        rgb = a[..., :3].astype(np.float64)
        luma = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
        return np.clip(np.rint(luma), 0, 255).astype(np.uint8)
    raise ImageFormatError(f"cannot convert array of shape {a.shape} to grayscale")


def _parse_pgm(data: bytes) -> np.ndarray:
    # Header tokens may be separated by whitespace and '#' comments.
    if not data.startswith(b"P5"):
        raise ImageFormatError("only binary PGM (P5) is supported")
    pos = 2
    tokens: list[int] = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated PGM header")
        try:
            tokens.append(int(data[start:pos]))
        except ValueError:
            raise ImageFormatError("malformed PGM header") from None
    pos += 1  # single whitespace byte after maxval
    width, height, maxval = tokens
    if maxval != 255:
        raise ImageFormatError(f"PGM maxval {maxval} unsupported; need 8-bit (255)")
    if width < 1 or height < 1:
        raise ImageFormatError("PGM dimensions must be positive")
    pixels = data[pos:pos + width * height]
    if len(pixels) < width * height:
        raise ImageFormatError("PGM pixel data truncated")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width).copy()


def load_image(path: str | Path) -> np.ndarray:
    """Load a PGM (P5) or PNG file as an HxW uint8 grayscale array."""
    raw = Path(path).read_bytes()
    if raw[:2] in (b"P5", b"P2", b"P6", b"P4", b"P1", b"P3"):
        return _parse_pgm(raw)
    if raw[:8] == b"\x89PNG\r\n\x1a\n":
        try:
            with Image.open(io.BytesIO(raw)) as img:
                if img.mode == "L":
                    return np.asarray(img, dtype=np.uint8).copy()
                if img.mode in ("RGB", "RGBA", "P", "LA", "I;16", "I"):
                    return to_gray(np.asarray(img.convert("RGB"), dtype=np.uint8))
                raise ImageFormatError(f"unsupported PNG mode {img.mode!r}")
        except UnidentifiedImageError as exc:
            raise ImageFormatError(f"{path}: corrupt PNG") from exc
    raise ImageFormatError(f"{path}: not a PGM (P5) or PNG file")


def decode_image_bytes(raw: bytes) -> np.ndarray:
    """Same as load_image but from an in-memory buffer (e.g. an upload)."""
    if raw[:2] == b"P5":
        return _parse_pgm(raw)
    if raw[:8] == b"\x89PNG\r\n\x1a\n":
        try:
            with Image.open(io.BytesIO(raw)) as img:
                if img.mode == "L":
                    return np.asarray(img, dtype=np.uint8).copy()
                return to_gray(np.asarray(img.convert("RGB"), dtype=np.uint8))
        except UnidentifiedImageError as exc:
            raise ImageFormatError("corrupt PNG upload") from exc
    raise ImageFormatError("uploaded frame must be PGM (P5) or PNG")


def encode_image_bytes(array: np.ndarray, media_type: str = "image/png") -> bytes:
    """Inverse of decode_image_bytes: uint8 grayscale array to PNG or PGM bytes."""
    a = np.ascontiguousarray(np.asarray(array, dtype=np.uint8))
    if a.ndim != 2:
        raise ImageFormatError("encode_image_bytes expects a 2-D grayscale array")
    if media_type == "image/png":
        buf = io.BytesIO()
        Image.fromarray(a, mode="L").save(buf, format="PNG")
        return buf.getvalue()
    if media_type == "image/x-portable-graymap":
        header = f"P5\n{a.shape[1]} {a.shape[0]}\n255\n".encode("ascii")
        return header + a.tobytes()
    raise ImageFormatError(f"unsupported media type {media_type!r}")


def save_image(array: np.ndarray, path: str | Path) -> None:
    """Write a uint8 grayscale array as .pgm (P5) or .png by extension."""
    a = np.ascontiguousarray(np.asarray(array, dtype=np.uint8))
    if a.ndim != 2:
        raise ImageFormatError("save_image expects a 2-D grayscale array")
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".pgm":
        header = f"P5\n{a.shape[1]} {a.shape[0]}\n255\n".encode("ascii")
        p.write_bytes(header + a.tobytes())
    elif suffix == ".png":
        Image.fromarray(a, mode="L").save(p, format="PNG")
    else:
        raise ImageFormatError(f"unsupported output extension {suffix!r}; use .pgm or .png")
