"""Bit-level marker code manipulation.

A marker payload is an n-by-n binary grid (1 = black cell) packed into an
integer reading row-major, top-left cell first, most significant bit first.
Rotations follow numpy's rot90: one step is 90 degrees counter-clockwise in
the displayed image. Every other vision module converts through this one so
the packing convention cannot drift.
"""

from __future__ import annotations

import functools

import numpy as np

from ..errors import ValidationError


def grid_to_code(grid: np.ndarray) -> int:
    g = np.asarray(grid)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValidationError(f"payload grid must be square, got shape {g.shape}")
    code = 0
    for bit in (g.ravel() != 0):
        code = (code << 1) | int(bit)
    return code


def code_to_grid(code: int, n: int) -> np.ndarray:
    if code < 0 or code >= (1 << (n * n)):
        raise ValidationError(f"code {code} out of range for a {n}x{n} grid")
    bits = [(code >> (n * n - 1 - i)) & 1 for i in range(n * n)]
    return np.array(bits, dtype=np.uint8).reshape(n, n)


@functools.lru_cache(maxsize=None)
def _rotation_permutation(n: int) -> tuple[int, ...]:
    """perm[i] = source bit index that lands at bit i after one CCW rotation."""
    perm = []
    for i in range(n * n):
        r, c = divmod(i, n)
        # np.rot90: out[r, c] = in[c, n-1-r]
        perm.append(c * n + (n - 1 - r))
    return tuple(perm)


def rotate_code(code: int, n: int, turns: int = 1) -> int:
    """Rotate the packed grid by `turns` * 90 degrees counter-clockwise."""
    perm = _rotation_permutation(n)
    total = n * n
    for _ in range(turns % 4):
        out = 0
        for i in range(total):
            out |= ((code >> (total - 1 - perm[i])) & 1) << (total - 1 - i)
        code = out
    return code


def rotations(code: int, n: int) -> tuple[int, int, int, int]:
    r1 = rotate_code(code, n, 1)
    r2 = rotate_code(r1, n, 1)
    r3 = rotate_code(r2, n, 1)
    return (code, r1, r2, r3)


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()


def min_rotation_distance(a: int, b: int, n: int) -> int:
    """Minimum Hamming distance between a and any 90-degree rotation of b."""
    return min(hamming(a, rb) for rb in rotations(b, n))


def self_rotation_distance(code: int, n: int) -> int:
    """Minimum distance from a code to its own nonzero rotations."""
    _, r1, r2, r3 = rotations(code, n)
    return min(hamming(code, r1), hamming(code, r2), hamming(code, r3))
