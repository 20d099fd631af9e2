"""Tests for the simplicial complex data model."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from gridembed.complexes import (
    boundary,
    build_complex,
    complex_from_json,
    complex_to_json,
    connected_components,
    degree,
    subdivide_edges,
)
from gridembed.errors import (
    EmptyInput,
    InvalidSimplex,
    NotAGraph,
    VertexOutOfRange,
    ZeroDimensional,
)


def brute_closure(tuples):
    """Independent downward closure by power-set enumeration."""
    out = set()
    for t in tuples:
        t = tuple(sorted(t))
        for size in range(1, len(t) + 1):
            out.update(combinations(t, size))
    return out


def test_build_two_edges():
    Y = build_complex([[0, 1], [1, 2]])
    assert Y.dim == 1
    assert Y.vertex_count == 3
    assert Y.simplex_set == {(0,), (1,), (2,), (0, 1), (1, 2)}


def test_build_triangle_closure():
    Y = build_complex([[0, 1, 2]])
    assert Y.dim == 2
    assert Y.vertex_count == 3
    assert len(Y.simplices_of_dim(0)) == 3
    assert len(Y.simplices_of_dim(1)) == 3
    assert len(Y.simplices_of_dim(2)) == 1


def test_build_rejects_repeated_vertex():
    with pytest.raises(InvalidSimplex):
        build_complex([[0, 0, 1]])


def test_build_rejects_empty():
    with pytest.raises(EmptyInput):
        build_complex([])


def test_closure_matches_brute_force_on_random_inputs():
    rng = random.Random(7)
    for _ in range(50):
        raw = []
        for _ in range(rng.randint(1, 6)):
            size = rng.randint(1, 4)
            raw.append(rng.sample(range(8), size))
        Y = build_complex(raw)
        assert Y.simplex_set == brute_closure(raw)


def test_degree_triangle_vertex():
    # oracle: enumerate the closure of one triangle by hand
    Y = build_complex([[0, 1, 2]])
    # vertex 0 sits in {0}, {0,1}, {0,2}, {0,1,2}
    assert degree(Y, 0) == 4


def test_degree_isolated_vertex():
    Y = build_complex([[0], [1, 2]])
    assert degree(Y, 0) == 1


def test_degree_path_middle():
    Y = build_complex([[0, 1], [1, 2]])
    # vertex 1 sits in {1}, {0,1}, {1,2}
    assert degree(Y, 1) == 3


def test_degree_out_of_range():
    Y = build_complex([[0, 1]])
    with pytest.raises(VertexOutOfRange):
        degree(Y, 5)


def test_boundary_triangle():
    assert boundary((0, 1, 2)) == [(1, 2), (0, 2), (0, 1)]


def test_boundary_edge():
    assert boundary((0, 1)) == [(1,), (0,)]


def test_boundary_vertex_raises():
    with pytest.raises(ZeroDimensional):
        boundary((0,))


def test_boundary_of_boundary_vanishes_mod2():
    # each codim-2 face must appear an even number of times
    rng = random.Random(3)
    for _ in range(20):
        size = rng.randint(3, 6)
        simplex = tuple(sorted(rng.sample(range(12), size)))
        counts = {}
        for face in boundary(simplex):
            for sub in boundary(face):
                counts[sub] = counts.get(sub, 0) + 1
        assert all(c % 2 == 0 for c in counts.values())


def test_subdivide_single_cut():
    Y = build_complex([[0, 1]])
    Y2, prov = subdivide_edges(Y, {(0, 1): [Fraction(1, 2)]})
    assert Y2.vertex_count == 3
    assert set(Y2.simplices_of_dim(1)) == {(0, 2), (1, 2)}
    assert prov == {2: ((0, 1), Fraction(1, 2))}


def test_subdivide_no_cuts_is_identity():
    Y = build_complex([[0, 1], [1, 2]])
    Y2, prov = subdivide_edges(Y, {})
    assert Y2.simplex_set == Y.simplex_set
    assert prov == {}


def test_subdivide_two_cuts():
    Y = build_complex([[0, 1]])
    Y2, prov = subdivide_edges(Y, {(0, 1): [Fraction(1, 3), Fraction(2, 3)]})
    assert Y2.vertex_count == 4
    assert len(Y2.simplices_of_dim(1)) == 3
    assert prov[2] == ((0, 1), Fraction(1, 3))
    assert prov[3] == ((0, 1), Fraction(2, 3))


def test_subdivide_requires_graph():
    Y = build_complex([[0, 1, 2]])
    with pytest.raises(NotAGraph):
        subdivide_edges(Y, {})


def test_subdivide_preserves_components():
    rng = random.Random(11)
    for _ in range(20):
        v = rng.randint(2, 10)
        edges = set()
        for _ in range(rng.randint(1, 2 * v)):
            a, b = rng.sample(range(v), 2)
            edges.add(tuple(sorted((a, b))))
        Y = build_complex(sorted(edges))
        cuts = {e: [Fraction(1, 2)] for e in sorted(edges) if rng.random() < 0.5}
        Y2, _ = subdivide_edges(Y, cuts)
        assert connected_components(Y2) == connected_components(Y)


def test_degree_bound_stable_under_build():
    rng = random.Random(5)
    for _ in range(20):
        raw = [rng.sample(range(10), rng.randint(1, 3)) for _ in range(8)]
        Y = build_complex(raw)
        declared = Y.max_degree()
        assert all(degree(Y, v) <= declared for v in range(Y.vertex_count))


def test_json_roundtrip_and_closure_on_load():
    Y = build_complex([[0, 1, 2], [2, 3]])
    data = complex_to_json(Y)
    Y2 = complex_from_json(data)
    assert Y2.simplex_set == Y.simplex_set
    # maximal-only input closes on load
    Y3 = complex_from_json({"simplices": [[0, 1, 2], [2, 3]]})
    assert Y3.simplex_set == Y.simplex_set
