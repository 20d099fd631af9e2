"""Tests for lattice geometry: pieces, sweeps and plane queries."""

import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridembed.errors import (
    ApexNotOnPiece,
    AxisOutOfRange,
    DimensionMismatch,
    PieceNotInHyperplane,
)
from gridembed.geometry import (
    BoundingBox,
    CubicalCell,
    CubicalChain,
    Cone,
    MPlane,
    Point,
    Polyline,
    Prism,
    bbox_of_pieces,
    cell_boundary,
    chain_boundary_mod2,
    cone_over,
    piece_from_json,
    planes_hit_in_dim,
    planes_meeting_box,
    prism_between,
    project,
    shadow_sweep,
    stitch_unit_edges,
)


# -- independent oracle: sampled intersection dimension ------------------------

def sampled_cell_plane_dim(cell, plane, step=Fraction(1, 4)):
    """Dimension of cell-plane intersection estimated by 1/4-grid sampling."""
    ticks = [Fraction(0), step, 2 * step, 3 * step, Fraction(1)]
    axes_vals = []
    for a in range(cell.n):
        if a in cell.axes:
            axes_vals.append([cell.anchor[a] + t for t in ticks])
        else:
            axes_vals.append([Fraction(cell.anchor[a])])
    fixed = plane.fixed_map
    count = 0
    for p in product(*axes_vals):
        if all(p[a] == v for a, v in fixed.items()):
            count += 1
    if count == 0:
        return -1
    # matching samples form a 5^q grid slab
    q = 0
    while 5 ** (q + 1) <= count:
        q += 1
    assert 5**q == count
    return q


def oracle_planes_hit(piece, m, d):
    """Planes meeting the piece in dimension d, by exhaustive enumeration."""
    box = piece.bbox()
    hits = set()
    for plane in planes_meeting_box(box, m):
        best = max(
            (sampled_cell_plane_dim(c, plane) for c in piece.cells()),
            default=-1,
        )
        if best == d:
            hits.add(plane)
    return hits


# -- project -------------------------------------------------------------------

def test_project_point():
    assert project(Point((2, 3)), 1, 0) == Point((2, 0))


def test_project_polyline_collapses_steps():
    line = Polyline(((0, 0), (0, 1), (1, 1)))
    assert project(line, 1, 0) == Polyline(((0, 0), (1, 0)))


def test_project_idempotent():
    line = Polyline(((0, 0), (0, 2), (3, 2)))
    once = project(line, 0, 0)
    assert project(once, 0, 0) == once


def test_project_axis_out_of_range():
    with pytest.raises(AxisOutOfRange):
        project(Point((0, 0)), 5, 0)


def test_project_chain_mixed_dims_splits():
    chain = CubicalChain(frozenset({
        CubicalCell((0, 0), (0,)),   # spans axis 0: collapses
        CubicalCell((2, 0), (1,)),   # flat on axis 0: stays an edge
    }))
    out = project(chain, 0, 0)
    assert isinstance(out, list)
    dims = sorted(p.dim for p in out)
    assert dims == [0, 1]


# -- prism_between ---------------------------------------------------------------

def test_prism_point_to_polyline():
    p = prism_between(Point((0, 0, 0)), 2, 0, 3)
    assert isinstance(p, Polyline)
    assert len(p.cells()) == 3
    assert p.points == ((0, 0, 0), (0, 0, 3))


def test_prism_unit_edge_sweep_matches_brute_force():
    # oracle first: enumerate swept unit cells of edge (0,0,0)-(1,0,0)
    # swept along axis 2 from 0 to 2 by scanning all candidate 2-cells
    edge = Polyline(((0, 0, 0), (1, 0, 0)))
    expected = set()
    for t in range(0, 2):
        expected.add(CubicalCell((0, 0, t), (0, 2)))
    swept = prism_between(edge, 2, 0, 2)
    assert isinstance(swept, CubicalChain)
    assert swept.cells() == frozenset(expected)


def test_prism_degenerate_is_identity():
    edge = Polyline(((0, 0), (1, 0)))
    assert prism_between(edge, 1, 0, 0) is edge


def test_prism_requires_flat_piece():
    with pytest.raises(PieceNotInHyperplane):
        prism_between(Polyline(((0, 0), (0, 1))), 1, 0, 3)


def test_prism_boundary_identity_mod2():
    # boundary of the swept chain = base + translate + sweep of base boundary
    rng = random.Random(13)
    for _ in range(30):
        n = rng.choice([2, 3])
        k = rng.randint(1, n - 1)
        axis = rng.randrange(n)
        cells = set()
        for _ in range(rng.randint(1, 4)):
            axes = tuple(sorted(rng.sample([a for a in range(n) if a != axis], k)))
            anchor = [rng.randint(0, 2) for _ in range(n)]
            anchor[axis] = 0
            cells.add(CubicalCell(tuple(anchor), axes))
        base = CubicalChain(frozenset(cells))
        h = rng.randint(1, 3)
        swept = prism_between(base, axis, 0, h)
        got = chain_boundary_mod2(swept.cells())
        base_cells = set(base.cells())
        translated = {c.translate(tuple(h if a == axis else 0 for a in range(n)))
                      for c in base_cells}
        rim = chain_boundary_mod2(base_cells)
        side = set()
        for c in rim:
            for t in range(h):
                anchor = list(c.anchor)
                anchor[axis] = t
                side.add(CubicalCell(tuple(anchor), tuple(sorted(c.axes + (axis,)))))
        expected = (base_cells ^ translated) ^ side
        # base and translate are disjoint from side cells by dimension
        assert got == (base_cells | translated | side) - (base_cells & translated)


# -- cone ------------------------------------------------------------------------

def test_cone_over_point_at_itself():
    p = Point((1, 2))
    assert cone_over(p, (1, 2)) is p


def test_cone_bbox_equals_base_bbox():
    line = Polyline(((0, 0), (1, 0), (1, 1)))
    cone = cone_over(line, (0, 0))
    assert cone.bbox() == BoundingBox((0, 0), (1, 1))
    assert cone.dim == 2


def test_cone_apex_must_lie_on_piece():
    line = Polyline(((0, 0), (1, 0), (1, 1)))
    with pytest.raises(ApexNotOnPiece):
        cone_over(line, (5, 5))


# -- planes_hit_in_dim -------------------------------------------------------------

def test_planes_through_point():
    hits, exact = planes_hit_in_dim(Point((2, 3)), 1, 0)
    assert exact
    assert hits == {
        MPlane((1,), ((0, 2),)),   # the vertical line x=2
        MPlane((0,), ((1, 3),)),   # the horizontal line y=3
    }


def test_planes_containing_unit_segment():
    seg = Polyline(((0, 0), (0, 1)))
    hits, exact = planes_hit_in_dim(seg, 1, 1)
    assert exact
    assert hits == {MPlane((1,), ((0, 0),))}


def test_planes_of_long_flat_chain():
    # oracle first: brute-force all 2-planes meeting the bbox of the chain
    # [0,1] x {0} x [0,3] and keep those containing a full 2-cell
    cells = frozenset(CubicalCell((0, 0, t), (0, 2)) for t in range(3))
    chain = CubicalChain(cells)
    expected = oracle_planes_hit(chain, 2, 2)
    assert expected == {MPlane((0, 2), ((1, 0),))}
    hits, exact = planes_hit_in_dim(chain, 2, 2)
    assert exact
    assert hits == expected


def test_planes_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        planes_hit_in_dim(Point((0, 0)), 1, 1)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_plane_query_matches_sampled_oracle(data):
    n = data.draw(st.integers(2, 3), label="n")
    k = data.draw(st.integers(0, n - 1), label="k")
    m = data.draw(st.integers(k, n), label="m")
    cells = set()
    count = data.draw(st.integers(1, 4), label="cells")
    for _ in range(count):
        axes = tuple(sorted(data.draw(
            st.permutations(range(n)), label="axes")[:k]))
        anchor = tuple(data.draw(
            st.tuples(*[st.integers(0, 3)] * n), label="anchor"))
        cells.add(CubicalCell(anchor, axes))
    if k == 0:
        piece = Point(next(iter(cells)).anchor) if len(cells) == 1 else None
        if piece is None:
            return
    else:
        piece = CubicalChain(frozenset(cells))
    hits, exact = planes_hit_in_dim(piece, m, k)
    assert exact
    assert hits == oracle_planes_hit(piece, m, k)


def test_projection_composition_lowers_plane_dimension():
    # every plane hit by the projection lifts to a plane meeting the piece
    rng = random.Random(23)
    for _ in range(40):
        n = 3
        axis = rng.randrange(n)
        pts = [tuple(rng.randint(0, 3) for _ in range(n))]
        for _ in range(3):
            p = list(pts[-1])
            p[rng.randrange(n)] += rng.choice([-1, 1])
            pts.append(tuple(p))
        try:
            piece = Polyline(tuple(pts))
        except ValueError:
            continue
        proj = project(piece, axis, 0)
        if proj.dim != 1:
            continue
        m = 2
        proj_hits, _ = planes_hit_in_dim(proj, m - 1, 1)
        for plane in proj_hits:
            # lift by freeing the dropped axis
            free = tuple(sorted(plane.free + (axis,)))
            fixed = tuple((a, v) for a, v in plane.fixed if a != axis)
            lifted = MPlane(free, fixed)
            best = max(
                sampled_cell_plane_dim(c, lifted) for c in piece.cells()
            )
            assert best >= 1


def test_cone_query_is_conservative():
    rng = random.Random(31)
    for _ in range(25):
        n = 2
        pts = [(rng.randint(0, 3), rng.randint(0, 3))]
        for _ in range(4):
            p = list(pts[-1])
            p[rng.randrange(n)] += rng.choice([-1, 1])
            pts.append(tuple(p))
        try:
            line = Polyline(tuple(pts))
        except ValueError:
            continue
        apex = pts[0]
        cone = cone_over(line, apex)
        hits, exact = planes_hit_in_dim(cone, 2, 2)
        assert not exact
        # ground truth: a plane meets the cone 2-dimensionally only if it
        # holds the apex and a full base edge
        base_hits, _ = planes_hit_in_dim(line, 2, 1)
        truth = {h for h in base_hits if h.contains_point(apex)}
        assert truth <= hits


def test_shadow_sweep_of_point():
    out = shadow_sweep(Point((2, 3)), 0, 0)
    assert len(out) == 1
    assert out[0].cells() == Polyline(((0, 3), (2, 3))).cells()


def test_shadow_sweep_spanning_cells_degenerate():
    # an axis-0 segment swept along axis 0 has a one-dimensional shadow
    seg = Polyline(((1, 0), (3, 0)))
    out = shadow_sweep(seg, 0, 0)
    all_cells = set()
    for p in out:
        all_cells.update(p.cells())
    assert all_cells == Polyline(((0, 0), (3, 0))).cells()
    assert all(c.dim == 1 for c in all_cells)


def test_bbox_union_of_pieces():
    pieces = [Point((2, 3)), Polyline(((0, 0), (3, 0)))]
    assert bbox_of_pieces(pieces) == BoundingBox((0, 0), (3, 3))


def test_piece_json_roundtrip():
    pieces = [
        Point((1, 2)),
        Polyline(((0, 0), (0, 2), (1, 2))),
        CubicalChain(frozenset({CubicalCell((0, 0), (0, 1))})),
        Cone(Polyline(((0, 0), (2, 0))), (0, 0)),
        Prism(Cone(Polyline(((0, 0), (2, 0))), (0, 0)), 1, 0, 2),
    ]
    for p in pieces:
        assert piece_from_json(p.to_json()) == p


def test_stitch_unit_edges_reassembles_path():
    line = Polyline(((0, 0), (0, 3), (2, 3)))
    paths = stitch_unit_edges(line.cells())
    assert len(paths) == 1
    assert {paths[0][0], paths[0][-1]} == {(0, 0), (2, 3)}
