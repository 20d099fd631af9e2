"""Tests for greedy plane-sparse placement."""

import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridembed.errors import MEqualsN
from gridembed.placement import (
    PlacementConfig,
    check_placement,
    default_config,
    greedy_place,
    min_constant,
    placement_from_json,
)


def scan_min_constant(n, m):
    """Independent oracle: scan C upward until C^(n-m) > binom(n, m)."""
    c = 1
    while not c ** (n - m) > comb(n, m):
        c += 1
    return c


@pytest.mark.parametrize("n,m,expected", [(2, 1, 3), (3, 1, 2), (3, 0, 2)])
def test_min_constant_examples(n, m, expected):
    assert scan_min_constant(n, m) == expected
    assert min_constant(n, m) == expected


def test_min_constant_rejects_m_equals_n():
    with pytest.raises(MEqualsN):
        min_constant(3, 3)


@given(st.integers(1, 6), st.data())
@settings(max_examples=40, deadline=None)
def test_min_constant_matches_scan(n, data):
    m = data.draw(st.integers(0, n - 1))
    assert min_constant(n, m) == scan_min_constant(n, m)


def test_diagonal_placement():
    config = default_config(2, 1, 4)
    placement = greedy_place(4, config)
    assert placement.coords == [(0, 0), (1, 1), (2, 2), (3, 3)]
    assert check_placement(placement, config)


def test_single_vertex_at_origin():
    for n, m in [(2, 1), (3, 2), (4, 0)]:
        config = default_config(n, m, 1)
        placement = greedy_place(1, config)
        assert placement.coords == [tuple([0] * n)]


def test_m_zero_is_plain_injectivity():
    config = default_config(1, 0, 5)
    placement = greedy_place(5, config)
    assert placement.coords == [(0,), (1,), (2,), (3,), (4,)]


def test_check_placement_rejects_shared_plane():
    config = default_config(2, 1, 2)
    placement = greedy_place(2, config)
    placement.coords = [(0, 0), (0, 5)]  # share the line x=0
    assert not check_placement(placement, config)


def test_all_small_configs_place_and_verify():
    for n in range(1, 5):
        for m in range(0, n):
            config = default_config(n, m, 30)
            placement = greedy_place(30, config)
            assert len(placement.coords) == 30
            assert check_placement(placement, config)


def test_each_point_occupies_fresh_planes():
    config = default_config(3, 1, 40)
    placement = greedy_place(40, config)
    counts = {}
    for p in placement.coords:
        for axes in combinations(range(3), 2):
            key = (axes, tuple(p[a] for a in axes))
            counts[key] = counts.get(key, 0) + 1
    assert all(c == 1 for c in counts.values())
    assert len(counts) == 40 * comb(3, 1)


def test_box_side_scaling():
    c = min_constant(3, 1)
    for v in (16, 64, 256):
        config = default_config(3, 1, v)
        placement = greedy_place(v, config)
        achieved = max(max(p) for p in placement.coords)
        assert achieved <= c * (v ** 0.5) + 1


def test_determinism():
    config = default_config(3, 1, 25)
    a = greedy_place(25, config)
    b = greedy_place(25, config)
    assert a.coords == b.coords


def test_random_tie_break_is_seeded_and_valid():
    config = default_config(2, 1, 12)
    a = greedy_place(12, config, tie_break=("random", 9))
    b = greedy_place(12, config, tie_break=("random", 9))
    c = greedy_place(12, config, tie_break=("random", 10))
    assert a.coords == b.coords
    assert a.coords != c.coords
    assert check_placement(a, config)


def test_m_equals_n_rejected_for_many_vertices():
    with pytest.raises(MEqualsN):
        PlacementConfig(n=2, m=2, side_constant=1, V=5)


def test_json_roundtrip():
    config = default_config(2, 1, 6)
    placement = greedy_place(6, config)
    again = placement_from_json(placement.to_json())
    assert again.coords == placement.coords
    assert check_placement(again, again.config)
