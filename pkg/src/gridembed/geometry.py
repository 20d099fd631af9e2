"""Unit-lattice geometry: planes, cells, pieces, sweeps and plane queries.

The unit lattice in n-space carries its usual skeletal decomposition:
points, unit edges, unit squares and so on.  An axis-parallel plane with
``m`` free axes is identified by the set of free axes plus the integer
values of the fixed coordinates.  Geometric pieces are the building
blocks of simplex images:

* ``Point``        -- a lattice point,
* ``Polyline``     -- a chain of axis-parallel unit edges,
* ``CubicalChain`` -- a set of unit cells of one dimension,
* ``Prism``        -- a symbolic sweep of a piece along one axis,
* ``Cone``         -- the join of a piece with one of its own points.

Point/Polyline/CubicalChain pieces answer plane-incidence queries
exactly; Prism and Cone answer them with a sound over-approximation and
are flagged as such.  The incidence criterion at the piece's own
dimension k is "the plane contains at least one full k-cell".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product

from gridembed.errors import (
    ApexNotOnPiece,
    AxisOutOfRange,
    DimensionMismatch,
    ParseError,
    PieceNotInHyperplane,
)

IntPoint = tuple[int, ...]


def iroot(x: int, q: int) -> int:
    """Floor of the q-th root of a nonnegative integer, exactly."""
    if x < 0 or q < 1:
        raise ValueError("iroot needs x >= 0 and q >= 1")
    if x == 0:
        return 0
    r = int(round(x ** (1.0 / q)))
    while r > 0 and r**q > x:
        r -= 1
    while (r + 1) ** q <= x:
        r += 1
    return r


def ceil_root_scaled(c: int, v: int, q: int) -> int:
    """ceil(c * v**(1/q)) computed in exact integer arithmetic."""
    w = iroot(c**q * v, q)
    return w if w**q == c**q * v else w + 1


# -- bounding boxes -----------------------------------------------------------

@dataclass(frozen=True)
class BoundingBox:
    lo: IntPoint
    hi: IntPoint

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def side(self) -> int:
        return max((h - l for l, h in zip(self.lo, self.hi)), default=0)

    def union(self, other: "BoundingBox") -> "BoundingBox":
        return BoundingBox(
            tuple(min(a, b) for a, b in zip(self.lo, other.lo)),
            tuple(max(a, b) for a, b in zip(self.hi, other.hi)),
        )

    def contains_point(self, p) -> bool:
        return all(l <= x <= h for l, x, h in zip(self.lo, p, self.hi))

    def to_json(self) -> list:
        return [[int(l), int(h)] for l, h in zip(self.lo, self.hi)]


def bbox_from_points(points) -> BoundingBox:
    pts = list(points)
    lo = tuple(min(p[a] for p in pts) for a in range(len(pts[0])))
    hi = tuple(max(p[a] for p in pts) for a in range(len(pts[0])))
    return BoundingBox(lo, hi)


# -- planes -------------------------------------------------------------------

@dataclass(frozen=True)
class MPlane:
    """Axis-parallel plane: ``free`` axes vary, the rest are fixed integers."""

    free: tuple[int, ...]
    fixed: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "free", tuple(sorted(self.free)))
        object.__setattr__(self, "fixed", tuple(sorted(self.fixed)))
        axes = set(self.free) | {a for a, _ in self.fixed}
        if len(axes) != len(self.free) + len(self.fixed):
            raise AxisOutOfRange("free and fixed axes overlap")

    @property
    def n(self) -> int:
        return len(self.free) + len(self.fixed)

    @property
    def m(self) -> int:
        return len(self.free)

    @property
    def fixed_map(self) -> dict[int, int]:
        return dict(self.fixed)

    def contains_point(self, p) -> bool:
        return all(p[a] == v for a, v in self.fixed)

    def to_json(self) -> dict:
        return {"free": list(self.free), "fixed": {str(a): v for a, v in self.fixed}}


def plane_from_json(data: dict) -> MPlane:
    return MPlane(
        tuple(data["free"]),
        tuple((int(a), int(v)) for a, v in data["fixed"].items()),
    )


def planes_through_point(p: IntPoint, m: int) -> set[MPlane]:
    n = len(p)
    out = set()
    for free in combinations(range(n), m):
        fset = set(free)
        out.add(MPlane(free, tuple((a, p[a]) for a in range(n) if a not in fset)))
    return out


def planes_meeting_box(box: BoundingBox, m: int) -> list[MPlane]:
    """Every plane with m free axes whose fixed coordinates fall in the box."""
    n = box.n
    out: list[MPlane] = []
    for free in combinations(range(n), m):
        others = [a for a in range(n) if a not in free]
        ranges = [range(box.lo[a], box.hi[a] + 1) for a in others]
        for vals in product(*ranges):
            out.append(MPlane(free, tuple(zip(others, vals))))
    return out


# -- cells --------------------------------------------------------------------

@dataclass(frozen=True)
class CubicalCell:
    """The unit cell ``anchor + [0,1]^axes`` of the lattice."""

    anchor: IntPoint
    axes: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "axes", tuple(sorted(self.axes)))
        if self.axes and not (0 <= self.axes[0] and self.axes[-1] < len(self.anchor)):
            raise AxisOutOfRange(f"cell axes {self.axes} out of range")

    @property
    def n(self) -> int:
        return len(self.anchor)

    @property
    def dim(self) -> int:
        return len(self.axes)

    def vertices(self) -> list[IntPoint]:
        axset = self.axes
        out = []
        for bits in product((0, 1), repeat=len(axset)):
            p = list(self.anchor)
            for a, b in zip(axset, bits):
                p[a] += b
            out.append(tuple(p))
        return out

    def contains_point(self, p: IntPoint) -> bool:
        for a in range(self.n):
            lo = self.anchor[a]
            hi = lo + (1 if a in self.axes else 0)
            if not lo <= p[a] <= hi:
                return False
        return True

    def translate(self, vec: IntPoint) -> "CubicalCell":
        return CubicalCell(tuple(x + d for x, d in zip(self.anchor, vec)), self.axes)

    def bbox(self) -> BoundingBox:
        hi = tuple(x + (1 if a in self.axes else 0) for a, x in enumerate(self.anchor))
        return BoundingBox(self.anchor, hi)


def cell_boundary(cell: CubicalCell) -> list[CubicalCell]:
    """The 2k facets of a k-cell."""
    out = []
    for a in cell.axes:
        rest = tuple(b for b in cell.axes if b != a)
        out.append(CubicalCell(cell.anchor, rest))
        shifted = list(cell.anchor)
        shifted[a] += 1
        out.append(CubicalCell(tuple(shifted), rest))
    return out


def chain_boundary_mod2(cells) -> set[CubicalCell]:
    """Mod-2 boundary of a set of equal-dimension cells."""
    out: set[CubicalCell] = set()
    for c in cells:
        for f in cell_boundary(c):
            out.symmetric_difference_update({f})
    return out


# -- pieces -------------------------------------------------------------------

class GeomPiece:
    """Common interface; concrete pieces are immutable dataclasses."""

    is_exact = True

    @property
    def n(self) -> int:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def cells(self) -> frozenset[CubicalCell]:
        """Unit cells of an exact piece (all of the piece's own dimension)."""
        raise NotImplementedError

    def bbox(self) -> BoundingBox:
        raise NotImplementedError

    def contains_point(self, p: IntPoint) -> bool:
        raise NotImplementedError

    def translate(self, vec: IntPoint) -> "GeomPiece":
        raise NotImplementedError

    def drop_axis(self, axis: int) -> "GeomPiece":
        """Remove an axis on which the piece is flat (constant, not spanned)."""
        raise NotImplementedError

    def append_axis(self, value: int) -> "GeomPiece":
        """Embed into one more ambient dimension at a fixed last coordinate."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


def _drop(p: IntPoint, axis: int) -> IntPoint:
    return p[:axis] + p[axis + 1:]


@dataclass(frozen=True)
class Point(GeomPiece):
    coords: IntPoint

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def dim(self) -> int:
        return 0

    def cells(self) -> frozenset[CubicalCell]:
        return frozenset({CubicalCell(self.coords, ())})

    def bbox(self) -> BoundingBox:
        return BoundingBox(self.coords, self.coords)

    def contains_point(self, p: IntPoint) -> bool:
        return tuple(p) == self.coords

    def translate(self, vec: IntPoint) -> "Point":
        return Point(tuple(x + d for x, d in zip(self.coords, vec)))

    def drop_axis(self, axis: int) -> "Point":
        return Point(_drop(self.coords, axis))

    def append_axis(self, value: int) -> "Point":
        return Point(self.coords + (value,))

    def to_json(self) -> dict:
        return {"type": "point", "coords": list(self.coords)}


@dataclass(frozen=True)
class Polyline(GeomPiece):
    """Waypoints with axis-parallel moves; stored as unit lattice edges."""

    points: tuple[IntPoint, ...]
    _edges: frozenset[CubicalCell] = field(
        init=False, repr=False, compare=False, default=frozenset()
    )

    def __post_init__(self) -> None:
        pts = tuple(tuple(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValueError("a polyline needs at least two waypoints")
        edges = set()
        for a, b in zip(pts, pts[1:]):
            diff = [i for i in range(len(a)) if a[i] != b[i]]
            if len(diff) != 1:
                raise ValueError(
                    f"waypoints {a} -> {b} must differ in exactly one axis"
                )
            ax = diff[0]
            lo, hi = sorted((a[ax], b[ax]))
            for t in range(lo, hi):
                anchor = list(a)
                anchor[ax] = t
                edges.add(CubicalCell(tuple(anchor), (ax,)))
        object.__setattr__(self, "_edges", frozenset(edges))

    @property
    def n(self) -> int:
        return len(self.points[0])

    @property
    def dim(self) -> int:
        return 1

    def cells(self) -> frozenset[CubicalCell]:
        return self._edges

    def bbox(self) -> BoundingBox:
        return bbox_from_points(self.points)

    def contains_point(self, p: IntPoint) -> bool:
        p = tuple(p)
        return any(c.contains_point(p) for c in self._edges)

    def translate(self, vec: IntPoint) -> "Polyline":
        return Polyline(tuple(tuple(x + d for x, d in zip(p, vec)) for p in self.points))

    def drop_axis(self, axis: int) -> "Polyline":
        return Polyline(tuple(_drop(p, axis) for p in self.points))

    def append_axis(self, value: int) -> "Polyline":
        return Polyline(tuple(p + (value,) for p in self.points))

    def to_json(self) -> dict:
        return {"type": "polyline", "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class CubicalChain(GeomPiece):
    """A set of unit cells sharing one dimension k."""

    chain_cells: frozenset[CubicalCell]

    def __post_init__(self) -> None:
        cells = frozenset(self.chain_cells)
        object.__setattr__(self, "chain_cells", cells)
        if not cells:
            raise ValueError("a cubical chain needs at least one cell")
        dims = {c.dim for c in cells}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed cell dimensions {sorted(dims)} in one chain")

    @property
    def n(self) -> int:
        return next(iter(self.chain_cells)).n

    @property
    def dim(self) -> int:
        return next(iter(self.chain_cells)).dim

    def cells(self) -> frozenset[CubicalCell]:
        return self.chain_cells

    def bbox(self) -> BoundingBox:
        box = None
        for c in self.chain_cells:
            box = c.bbox() if box is None else box.union(c.bbox())
        return box

    def contains_point(self, p: IntPoint) -> bool:
        p = tuple(p)
        return any(c.contains_point(p) for c in self.chain_cells)

    def translate(self, vec: IntPoint) -> "CubicalChain":
        return CubicalChain(frozenset(c.translate(vec) for c in self.chain_cells))

    def drop_axis(self, axis: int) -> "CubicalChain":
        cells = set()
        for c in self.chain_cells:
            if axis in c.axes:
                raise PieceNotInHyperplane(f"cell {c} spans axis {axis}")
            cells.add(CubicalCell(
                _drop(c.anchor, axis),
                tuple(a if a < axis else a - 1 for a in c.axes),
            ))
        return CubicalChain(frozenset(cells))

    def append_axis(self, value: int) -> "CubicalChain":
        return CubicalChain(frozenset(
            CubicalCell(c.anchor + (value,), c.axes) for c in self.chain_cells
        ))

    def to_json(self) -> dict:
        cells = sorted(self.chain_cells, key=lambda c: (c.anchor, c.axes))
        return {
            "type": "chain",
            "k": self.dim,
            "cells": [{"anchor": list(c.anchor), "axes": list(c.axes)} for c in cells],
        }


@dataclass(frozen=True)
class Prism(GeomPiece):
    """Symbolic sweep of a base piece along one axis between two heights.

    Only kept symbolic when the base cannot be expanded into unit cells;
    exact bases are expanded eagerly by :func:`prism_between`.
    """

    base: GeomPiece
    axis: int
    lo: int
    hi: int

    is_exact = False

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def dim(self) -> int:
        return self.base.dim + (1 if self.hi > self.lo else 0)

    def bbox(self) -> BoundingBox:
        b = self.base.bbox()
        lo = list(b.lo)
        hi = list(b.hi)
        lo[self.axis] = min(lo[self.axis], self.lo)
        hi[self.axis] = max(hi[self.axis], self.hi)
        return BoundingBox(tuple(lo), tuple(hi))

    def contains_point(self, p: IntPoint) -> bool:
        if not self.lo <= p[self.axis] <= self.hi:
            return False
        q = list(p)
        q[self.axis] = self.lo
        return self.base.contains_point(tuple(q))

    def translate(self, vec: IntPoint) -> "Prism":
        return Prism(self.base.translate(vec), self.axis,
                     self.lo + vec[self.axis], self.hi + vec[self.axis])

    def drop_axis(self, axis: int) -> "GeomPiece":
        if axis == self.axis:
            raise PieceNotInHyperplane("prism spans its sweep axis")
        new_axis = self.axis if self.axis < axis else self.axis - 1
        return Prism(self.base.drop_axis(axis), new_axis, self.lo, self.hi)

    def append_axis(self, value: int) -> "Prism":
        return Prism(self.base.append_axis(value), self.axis, self.lo, self.hi)

    def to_json(self) -> dict:
        return {"type": "prism", "base": self.base.to_json(),
                "axis": self.axis, "from": self.lo, "to": self.hi}


@dataclass(frozen=True)
class Cone(GeomPiece):
    """Join of a base piece with an apex that lies on the base."""

    base: GeomPiece
    apex: IntPoint

    is_exact = False

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def dim(self) -> int:
        return self.base.dim + 1

    def bbox(self) -> BoundingBox:
        return self.base.bbox()

    def contains_point(self, p: IntPoint) -> bool:
        # sound over-approximation: bbox membership
        return self.bbox().contains_point(p)

    def translate(self, vec: IntPoint) -> "Cone":
        return Cone(self.base.translate(vec),
                    tuple(x + d for x, d in zip(self.apex, vec)))

    def drop_axis(self, axis: int) -> "Cone":
        return Cone(self.base.drop_axis(axis), _drop(self.apex, axis))

    def append_axis(self, value: int) -> "Cone":
        return Cone(self.base.append_axis(value), self.apex + (value,))

    def to_json(self) -> dict:
        return {"type": "cone", "base": self.base.to_json(), "apex": list(self.apex)}


def piece_from_json(data: dict) -> GeomPiece:
    kind = data.get("type")
    if kind == "point":
        return Point(tuple(data["coords"]))
    if kind == "polyline":
        return Polyline(tuple(tuple(p) for p in data["points"]))
    if kind == "chain":
        return CubicalChain(frozenset(
            CubicalCell(tuple(c["anchor"]), tuple(c["axes"])) for c in data["cells"]
        ))
    if kind == "prism":
        return Prism(piece_from_json(data["base"]), int(data["axis"]),
                     int(data["from"]), int(data["to"]))
    if kind == "cone":
        return Cone(piece_from_json(data["base"]), tuple(data["apex"]))
    raise ParseError(f"unknown piece type {kind!r}")


# -- transforms ---------------------------------------------------------------

def project(piece: GeomPiece, drop_axis: int, target_value: int):
    """Set one coordinate of a piece to a fixed integer value.

    The image of a point/polyline stays a single piece; a cubical chain
    whose cells mix spanning and non-spanning behaviour along the dropped
    axis splits by dimension and a list of pieces is returned.
    """
    if not 0 <= drop_axis < piece.n:
        raise AxisOutOfRange(f"axis {drop_axis} out of range for n={piece.n}")
    if isinstance(piece, Point):
        c = list(piece.coords)
        c[drop_axis] = target_value
        return Point(tuple(c))
    if isinstance(piece, Polyline):
        pts: list[IntPoint] = []
        for p in piece.points:
            q = list(p)
            q[drop_axis] = target_value
            q = tuple(q)
            if not pts or pts[-1] != q:
                pts.append(q)
        if len(pts) == 1:
            return Point(pts[0])
        return Polyline(tuple(pts))
    if isinstance(piece, CubicalChain):
        by_dim: dict[int, set[CubicalCell]] = {}
        for c in piece.chain_cells:
            anchor = list(c.anchor)
            anchor[drop_axis] = target_value
            axes = tuple(a for a in c.axes if a != drop_axis)
            cell = CubicalCell(tuple(anchor), axes)
            by_dim.setdefault(cell.dim, set()).add(cell)
        pieces: list[GeomPiece] = []
        for k in sorted(by_dim):
            cells = by_dim[k]
            if k == 0:
                pieces.extend(Point(c.anchor) for c in sorted(cells, key=lambda c: c.anchor))
            else:
                pieces.append(CubicalChain(frozenset(cells)))
        return pieces[0] if len(pieces) == 1 else pieces
    if isinstance(piece, Prism):
        if drop_axis == piece.axis:
            return project(piece.base, drop_axis, target_value)
        return Prism(project(piece.base, drop_axis, target_value),
                     piece.axis, piece.lo, piece.hi)
    if isinstance(piece, Cone):
        # projection commutes with the join: the image is the cone of the
        # projected base from the projected apex
        apex = list(piece.apex)
        apex[drop_axis] = target_value
        apex = tuple(apex)
        base = project(piece.base, drop_axis, target_value)
        if isinstance(base, list):
            return [b if isinstance(b, Point) and b.coords == apex else Cone(b, apex)
                    for b in base]
        if isinstance(base, Point):
            return base if base.coords == apex else Cone(base, apex)
        return Cone(base, apex)
    raise ParseError(f"cannot project piece {piece!r}")


def piece_constant_coordinate(piece: GeomPiece, axis: int):
    """The single value of a coordinate if the piece is flat on it, else None."""
    b = piece.bbox()
    return b.lo[axis] if b.lo[axis] == b.hi[axis] else None


def prism_between(piece: GeomPiece, axis: int, frm: int, to: int) -> GeomPiece:
    """Sweep a piece sitting at ``axis == frm`` to its translate at ``to``.

    Exact pieces expand into one more dimension of unit cells; symbolic
    pieces (cones) stay wrapped in a Prism.
    """
    if not 0 <= axis < piece.n:
        raise AxisOutOfRange(f"axis {axis} out of range for n={piece.n}")
    if piece_constant_coordinate(piece, axis) != frm:
        raise PieceNotInHyperplane(
            f"piece is not flat at coordinate {axis} == {frm}"
        )
    if frm == to:
        return piece
    lo, hi = sorted((frm, to))
    if isinstance(piece, Point):
        a = list(piece.coords)
        a[axis] = lo
        b = list(piece.coords)
        b[axis] = hi
        return Polyline((tuple(a), tuple(b)))
    if isinstance(piece, (Polyline, CubicalChain)):
        cells = set()
        for c in piece.cells():
            for t in range(lo, hi):
                anchor = list(c.anchor)
                anchor[axis] = t
                cells.add(CubicalCell(tuple(anchor), tuple(sorted(c.axes + (axis,)))))
        return CubicalChain(frozenset(cells))
    return Prism(piece, axis, lo, hi)


def cone_over(piece: GeomPiece, apex: IntPoint) -> GeomPiece:
    """Cone from a piece to one of its own points; a point cones to itself."""
    apex = tuple(apex)
    if not piece.contains_point(apex):
        raise ApexNotOnPiece(f"apex {apex} not on the piece")
    if isinstance(piece, Point):
        return piece
    return Cone(piece, apex)


def bbox_of_pieces(pieces) -> BoundingBox | None:
    box = None
    for p in pieces:
        box = p.bbox() if box is None else box.union(p.bbox())
    return box


# -- plane queries ------------------------------------------------------------

def planes_containing_cell(cell: CubicalCell, m: int) -> list[MPlane]:
    """All planes with m free axes that contain the whole cell."""
    k = cell.dim
    if m < k:
        return []
    others = [a for a in range(cell.n) if a not in cell.axes]
    out = []
    for extra in combinations(others, m - k):
        eset = set(extra)
        free = tuple(sorted(cell.axes + tuple(extra)))
        fixed = tuple((a, cell.anchor[a]) for a in others if a not in eset)
        out.append(MPlane(free, fixed))
    return out


def planes_hit_in_dim(piece: GeomPiece, m: int, d: int) -> tuple[set[MPlane], bool]:
    """Planes with m free axes meeting the piece in a set of dimension d.

    ``d`` must equal the piece's own dimension.  Returns the plane set and
    an exactness flag; cone and symbolic-prism pieces return a sound
    superset flagged as over-approximate.
    """
    n = piece.n
    if not 0 <= d <= m <= n:
        raise DimensionMismatch(f"need 0 <= d <= m <= n, got d={d} m={m} n={n}")
    if piece.dim != d:
        raise DimensionMismatch(f"piece has dimension {piece.dim}, queried at {d}")
    if isinstance(piece, (Point, Polyline, CubicalChain)):
        out: set[MPlane] = set()
        for c in piece.cells():
            out.update(planes_containing_cell(c, m))
        return out, True
    if isinstance(piece, Prism):
        if piece.hi == piece.lo:
            return planes_hit_in_dim(piece.base, m, d)
        if m == 0:
            return set(), False
        # only planes freeing the sweep axis can contain a full top cell;
        # they correspond to (m-1)-planes against the dropped base
        base_flat = piece.base.drop_axis(piece.axis)
        sub, _ = planes_hit_in_dim(base_flat, m - 1, d - 1)
        lifted = {_lift_plane_free(pl, piece.axis) for pl in sub}
        return lifted, False
    if isinstance(piece, Cone):
        out = set(planes_through_point(piece.apex, m))
        base = piece.base
        if base.is_exact:
            for c in base.cells():
                out.update(planes_containing_cell(c, m))
        else:
            out.update(planes_meeting_box(piece.bbox(), m))
        return out, False
    raise DimensionMismatch(f"unsupported piece {piece!r}")


def _lift_plane_free(plane: MPlane, axis: int) -> MPlane:
    """Reinsert an axis as a free axis into a plane of the dropped space."""
    free = tuple(a if a < axis else a + 1 for a in plane.free) + (axis,)
    fixed = tuple((a if a < axis else a + 1, v) for a, v in plane.fixed)
    return MPlane(free, fixed)


def planes_touching(piece: GeomPiece, m: int) -> set[MPlane]:
    """Planes with m free axes whose intersection with the piece is nonempty.

    Used for the auxiliary dimension-below counts; every touching plane
    contains a vertex of some cell, so vertex enumeration is complete.
    For symbolic pieces their bounding box stands in (over-approximate).
    """
    out: set[MPlane] = set()
    if piece.is_exact:
        for c in piece.cells():
            for v in c.vertices():
                out.update(planes_through_point(v, m))
    else:
        out.update(planes_meeting_box(piece.bbox(), m))
    return out


# -- body of a swept shadow ----------------------------------------------------

def shadow_sweep(piece: GeomPiece, axis: int, target: int) -> list[GeomPiece]:
    """Sweep every cell of a piece along one axis down to a fixed value.

    The swept body between a piece and its projection: cells flat on the
    axis sweep to prisms; cells spanning the axis contribute the sweep of
    their projection (a degenerate, lower-dimensional part of the body).
    Symbolic pieces are swept whole.
    """
    if not 0 <= axis < piece.n:
        raise AxisOutOfRange(f"axis {axis} out of range for n={piece.n}")
    if not piece.is_exact:
        lo = piece.bbox().lo[axis]
        hi = piece.bbox().hi[axis]
        if lo == hi:
            if lo == target:
                return []
            return [prism_between(piece, axis, lo, target)]
        proj = project(piece, axis, target)
        proj_list = proj if isinstance(proj, list) else [proj]
        return [Prism(p, axis, min(target, hi), max(target, hi)) for p in proj_list]
    out: list[GeomPiece] = []
    flat: dict[int, set[CubicalCell]] = {}
    spans: set[CubicalCell] = set()
    for c in piece.cells():
        if axis in c.axes:
            spans.add(c)
        else:
            flat.setdefault(c.anchor[axis], set()).add(c)
    for value, cells in sorted(flat.items()):
        if value == target:
            continue
        lo, hi = sorted((value, target))
        swept = set()
        for c in cells:
            for t in range(lo, hi):
                anchor = list(c.anchor)
                anchor[axis] = t
                swept.add(CubicalCell(tuple(anchor), tuple(sorted(c.axes + (axis,)))))
        out.append(CubicalChain(frozenset(swept)))
    for c in sorted(spans, key=lambda c: (c.anchor, c.axes)):
        # the shadow of a spanning cell is the sweep of its far facet
        far = c.anchor[axis] + 1 if c.anchor[axis] + 1 > target else c.anchor[axis]
        near = target
        lo, hi = sorted((near, far))
        if lo == hi:
            continue
        swept = set()
        rest = tuple(a for a in c.axes if a != axis)
        for t in range(lo, hi):
            anchor = list(c.anchor)
            anchor[axis] = t
            swept.add(CubicalCell(tuple(anchor), tuple(sorted(rest + (axis,)))))
        out.append(CubicalChain(frozenset(swept)))
    return out


def simplify_pieces(pieces) -> list[GeomPiece]:
    """Drop duplicates and merge cubical chains of equal dimension."""
    chains: dict[int, set[CubicalCell]] = {}
    others: list[GeomPiece] = []
    seen: set[GeomPiece] = set()
    for p in pieces:
        if isinstance(p, CubicalChain):
            chains.setdefault(p.dim, set()).update(p.chain_cells)
        elif p not in seen:
            seen.add(p)
            others.append(p)
    merged: list[GeomPiece] = list(others)
    for k in sorted(chains):
        merged.append(CubicalChain(frozenset(chains[k])))
    return merged


def pieces_to_json(pieces) -> list[dict]:
    return [p.to_json() for p in pieces]


def pieces_from_json(data) -> list[GeomPiece]:
    return [piece_from_json(d) for d in data]


def stitch_unit_edges(cells) -> list[list[IntPoint]]:
    """Group unit edges into maximal walks, for exports and connectivity tests."""
    adj: dict[IntPoint, list[IntPoint]] = {}
    edge_set = set()
    for c in cells:
        if c.dim != 1:
            continue
        a = c.anchor
        b = list(a)
        b[c.axes[0]] += 1
        b = tuple(b)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
        edge_set.add(frozenset((a, b)))
    paths: list[list[IntPoint]] = []
    remaining = set(edge_set)
    while remaining:
        e = min(remaining, key=lambda fs: tuple(sorted(fs)))
        a, b = sorted(e)
        remaining.discard(e)
        path = [a, b]
        # extend forward greedily
        while True:
            nxt = [c for c in adj.get(path[-1], ())
                   if frozenset((path[-1], c)) in remaining]
            if not nxt:
                break
            c = min(nxt)
            remaining.discard(frozenset((path[-1], c)))
            path.append(c)
        while True:
            nxt = [c for c in adj.get(path[0], ())
                   if frozenset((path[0], c)) in remaining]
            if not nxt:
                break
            c = min(nxt)
            remaining.discard(frozenset((path[0], c)))
            path.insert(0, c)
        paths.append(path)
    return paths
