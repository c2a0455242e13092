"""Marker dictionary generation: separation guarantees, determinism, and the
JSON round trip. The exhaustive separation check here doubles as the oracle
the acceptance gate reuses at full size."""

import numpy as np
import pytest

from archiguesser.errors import ExhaustedError, ParseError, ValidationError
from archiguesser.vision import (
    code_to_grid,
    generate_dictionary,
    load_dictionary,
    min_rotation_distance,
    save_dictionary,
)


def brute_force_min_separation(dictionary) -> int:
    """Smallest cross-rotation Hamming distance over all pairs, via numpy
    grids rather than the packed-integer paths under test."""
    n = dictionary.grid
    grids = [code_to_grid(c, n) for c in dictionary.codes]
    best = n * n + 1
    for i in range(len(grids)):
        for j in range(len(grids)):
            if i == j:
                continue
            for k in range(4):
                d = int(np.sum(grids[i] != np.rot90(grids[j], k)))
                best = min(best, d)
    return best


def brute_force_self_separation(dictionary) -> int:
    """Smallest distance between a code and its own nontrivial rotations."""
    n = dictionary.grid
    best = n * n + 1
    for code in dictionary.codes:
        g = code_to_grid(code, n)
        for k in (1, 2, 3):
            best = min(best, int(np.sum(g != np.rot90(g, k))))
    return best


def test_small_dictionary_meets_separation():
    d = generate_dictionary(16, 5, 7, seed=1)
    assert len(d) == 16
    assert brute_force_min_separation(d) >= 7
    assert brute_force_self_separation(d) >= 7


def test_same_seed_same_codes():
    a = generate_dictionary(12, 5, 7, seed=9)
    b = generate_dictionary(12, 5, 7, seed=9)
    assert a.codes == b.codes
    c = generate_dictionary(12, 5, 7, seed=10)
    assert c.codes != a.codes


def test_correction_capacity():
    d = generate_dictionary(4, 5, 7, seed=0)
    assert d.correction_capacity == 3  # floor((7-1)/2)


def test_impossible_distance_raises_immediately():
    with pytest.raises(ExhaustedError):
        generate_dictionary(2, 3, 10, seed=0)  # 9-bit payload


def test_unreachable_count_exhausts():
    # 2x2 payload has 16 codes; demanding many at distance 3 cannot succeed.
    with pytest.raises(ExhaustedError):
        generate_dictionary(30, 2, 3, seed=0)


def test_count_validation():
    with pytest.raises(ValidationError):
        generate_dictionary(0, 5, 7, seed=0)


def test_codes_are_distinct_across_rotations():
    d = generate_dictionary(16, 5, 7, seed=3)
    for i, a in enumerate(d.codes):
        for j, b in enumerate(d.codes):
            if i < j:
                assert min_rotation_distance(a, b, 5) > 0


def test_save_load_round_trip(tmp_path):
    d = generate_dictionary(8, 5, 7, seed=4)
    p = tmp_path / "dict.json"
    save_dictionary(d, p)
    loaded = load_dictionary(p)
    assert loaded.codes == d.codes
    assert loaded.grid == d.grid
    assert loaded.min_distance == d.min_distance
    assert loaded.seed == d.seed


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{nope")
    with pytest.raises(ParseError):
        load_dictionary(p)
    p.write_text("{\"grid\": 5}")
    with pytest.raises(ParseError):
        load_dictionary(p)
