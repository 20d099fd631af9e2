"""Independent certification of plane-sparsity for a lattice map.

``verify`` checks the three contract conditions:

1. every k-simplex image lies in the k-skeleton of the unit lattice,
2. each top-simplex image meets a bounded number of planes with m free
   axes in full dimension,
3. each such plane meets a bounded number of top-simplex images in full
   dimension,

and reports the measured maxima in a certificate.  ``brute_force_census``
recomputes the same certificate from first principles by enumerating
every plane that meets the bounding box; on maps made of exact pieces the
two must agree bit for bit.  Cone pieces make a certificate conservative:
its counts dominate the rasterized ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from gridembed.embedder import LatticeMap
from gridembed.errors import BoxTooLarge
from gridembed.geometry import (
    BoundingBox,
    Cone,
    CubicalCell,
    CubicalChain,
    GeomPiece,
    MPlane,
    Point,
    Polyline,
    Prism,
    bbox_of_pieces,
    planes_hit_in_dim,
    planes_meeting_box,
    planes_touching,
)


@dataclass
class SparsityCertificate:
    skeletal_ok: bool
    max_planes_per_simplex: int
    max_simplices_per_plane: int
    box: BoundingBox
    conservative: bool
    per_plane_histogram: dict[int, int] = field(default_factory=dict)
    aux_max_planes_touching_per_simplex: int | None = None
    aux_max_simplices_touching_plane: int | None = None
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.skeletal_ok

    def to_json(self) -> dict:
        return {
            "skeletal_ok": self.skeletal_ok,
            "max_planes_per_simplex": self.max_planes_per_simplex,
            "max_simplices_per_plane": self.max_simplices_per_plane,
            "box": self.box.to_json(),
            "conservative": self.conservative,
            "per_plane_histogram": {
                str(k): v for k, v in sorted(self.per_plane_histogram.items())
            },
            "aux_max_planes_touching_per_simplex":
                self.aux_max_planes_touching_per_simplex,
            "aux_max_simplices_touching_plane":
                self.aux_max_simplices_touching_plane,
            "violations": list(self.violations),
        }

    def counts_dominate(self, other: "SparsityCertificate") -> bool:
        return (self.max_planes_per_simplex >= other.max_planes_per_simplex
                and self.max_simplices_per_plane >= other.max_simplices_per_plane)


def _all_int(values) -> bool:
    return all(isinstance(v, int) and not isinstance(v, bool) for v in values)


def _piece_lattice_ok(piece: GeomPiece) -> tuple[bool, bool]:
    """(integer coordinates everywhere, needed a conservative judgement)."""
    if isinstance(piece, Point):
        return _all_int(piece.coords), False
    if isinstance(piece, Polyline):
        return all(_all_int(p) for p in piece.points), False
    if isinstance(piece, CubicalChain):
        return all(_all_int(c.anchor) for c in piece.chain_cells), False
    if isinstance(piece, Prism):
        ok, _ = _piece_lattice_ok(piece.base)
        return ok and _all_int((piece.lo, piece.hi)), True
    if isinstance(piece, Cone):
        ok, _ = _piece_lattice_ok(piece.base)
        return ok and _all_int(piece.apex), True
    return False, False


def _empty_certificate(n: int) -> SparsityCertificate:
    box = BoundingBox(tuple([0] * n), tuple([0] * n))
    return SparsityCertificate(True, 0, 0, box, False)


def verify(lattice_map: LatticeMap, aux: bool = False) -> SparsityCertificate:
    """Certify the sparsity conditions; violations are reported, not raised."""
    d = lattice_map.complex.dim
    m = lattice_map.m
    skeletal_ok = True
    conservative = False
    violations: list[str] = []
    for simplex, pieces in lattice_map.images.items():
        k = len(simplex) - 1
        for piece in pieces:
            ok, needs_flag = _piece_lattice_ok(piece)
            conservative = conservative or needs_flag
            if not ok:
                skeletal_ok = False
                violations.append(f"non-lattice piece on {simplex}")
            if piece.dim > k:
                skeletal_ok = False
                violations.append(
                    f"piece of dimension {piece.dim} on {k}-simplex {simplex}"
                )
    plane_incidence: dict[MPlane, int] = {}
    max_planes = 0
    aux_touch_max: int | None = None
    aux_touch_planes: dict[MPlane, int] = {}
    tops = lattice_map.complex.simplices_of_dim(d)
    for simplex in tops:
        pieces = lattice_map.images.get(simplex, [])
        hit: set[MPlane] = set()
        for piece in pieces:
            if piece.dim != d:
                continue
            planes, exact = planes_hit_in_dim(piece, m, d)
            conservative = conservative or not exact
            hit.update(planes)
        max_planes = max(max_planes, len(hit))
        for plane in hit:
            plane_incidence[plane] = plane_incidence.get(plane, 0) + 1
        if aux:
            touched: set[MPlane] = set()
            for piece in pieces:
                touched.update(planes_touching(piece, m))
            aux_touch_max = max(aux_touch_max or 0, len(touched))
            for plane in touched:
                aux_touch_planes[plane] = aux_touch_planes.get(plane, 0) + 1
    histogram: dict[int, int] = {}
    for count in plane_incidence.values():
        histogram[count] = histogram.get(count, 0) + 1
    box = bbox_of_pieces(p for pieces in lattice_map.images.values() for p in pieces)
    if box is None:
        box = BoundingBox(tuple([0] * lattice_map.n), tuple([0] * lattice_map.n))
    return SparsityCertificate(
        skeletal_ok=skeletal_ok,
        max_planes_per_simplex=max_planes,
        max_simplices_per_plane=max(plane_incidence.values(), default=0),
        box=box,
        conservative=conservative,
        per_plane_histogram=histogram,
        aux_max_planes_touching_per_simplex=aux_touch_max,
        aux_max_simplices_touching_plane=(
            max(aux_touch_planes.values(), default=0) if aux else None
        ),
        violations=violations,
    )


# -- first-principles intersection dimensions ----------------------------------

def _cell_plane_dim(cell: CubicalCell, plane: MPlane) -> int:
    """Dimension of cell/plane intersection by interval logic; -1 if empty."""
    dim = 0
    fixed = plane.fixed_map
    for a in range(cell.n):
        lo = cell.anchor[a]
        hi = lo + (1 if a in cell.axes else 0)
        if a in fixed:
            if not lo <= fixed[a] <= hi:
                return -1
        elif hi > lo:
            dim += 1
    return dim


_QUARTERS = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]


def _cell_plane_dim_rasterized(cell: CubicalCell, plane: MPlane) -> int:
    """Same question answered by counting quarter-grid sample matches."""
    fixed = plane.fixed_map
    axes_vals = []
    for a in range(cell.n):
        base = cell.anchor[a]
        vals = [base + t for t in _QUARTERS] if a in cell.axes else [Fraction(base)]
        axes_vals.append(vals)
    count = sum(
        1 for p in product(*axes_vals)
        if all(p[a] == v for a, v in fixed.items())
    )
    if count == 0:
        return -1
    q = 0
    while 5 ** (q + 1) <= count:
        q += 1
    return q


def _piece_plane_dim(piece: GeomPiece, plane: MPlane, rasterize: bool) -> int:
    if isinstance(piece, (Point, Polyline, CubicalChain)):
        fn = _cell_plane_dim_rasterized if rasterize else _cell_plane_dim
        return max((fn(c, plane) for c in piece.cells()), default=-1)
    if isinstance(piece, Cone):
        # a plane holds a full-dimension patch of a cone only through the
        # apex together with a full-dimension patch of the base
        base_dim = _piece_plane_dim(piece.base, plane, rasterize=True)
        if plane.contains_point(piece.apex):
            return base_dim + 1 if base_dim >= 0 else 0
        if base_dim >= 0:
            return base_dim
        # a slice strictly between apex and base: nonempty but thin
        hits_box = all(
            piece.bbox().lo[a] <= v <= piece.bbox().hi[a]
            for a, v in plane.fixed
        )
        return 0 if hits_box else -1
    if isinstance(piece, Prism):
        axis = piece.axis
        fixed = plane.fixed_map
        if axis in fixed:
            if not piece.lo <= fixed[axis] <= piece.hi:
                return -1
            reduced = MPlane(
                tuple(a if a < axis else a - 1 for a in plane.free),
                tuple((a if a < axis else a - 1, v)
                      for a, v in plane.fixed if a != axis),
            )
            return _piece_plane_dim(piece.base.drop_axis(axis), reduced, rasterize)
        reduced = MPlane(
            tuple(a if a < axis else a - 1 for a in plane.free if a != axis),
            tuple((a if a < axis else a - 1, v) for a, v in plane.fixed),
        )
        sub = _piece_plane_dim(piece.base.drop_axis(axis), reduced, rasterize)
        return sub + 1 if sub >= 0 else -1
    raise TypeError(f"unknown piece {piece!r}")


def brute_force_census(
    lattice_map: LatticeMap, box_limit: int = 16, aux: bool = False
) -> SparsityCertificate:
    """Recompute the certificate by enumerating every plane in the box."""
    d = lattice_map.complex.dim
    m = lattice_map.m
    box = bbox_of_pieces(p for pieces in lattice_map.images.values() for p in pieces)
    if box is None:
        cert = _empty_certificate(lattice_map.n)
        return cert
    if box.side > box_limit:
        raise BoxTooLarge(f"box side {box.side} exceeds limit {box_limit}")
    skeletal_ok = True
    conservative = False
    violations: list[str] = []
    for simplex, pieces in lattice_map.images.items():
        k = len(simplex) - 1
        for piece in pieces:
            ok, needs_flag = _piece_lattice_ok(piece)
            conservative = conservative or needs_flag
            if not ok:
                skeletal_ok = False
                violations.append(f"non-lattice piece on {simplex}")
            if piece.dim > k:
                skeletal_ok = False
                violations.append(
                    f"piece of dimension {piece.dim} on {k}-simplex {simplex}"
                )
    tops = lattice_map.complex.simplices_of_dim(d)
    per_simplex = {s: 0 for s in tops}
    plane_incidence: dict[MPlane, int] = {}
    aux_touch_max: int | None = 0 if aux else None
    aux_planes: dict[MPlane, int] = {}
    conservative = conservative or any(
        not p.is_exact for pieces in lattice_map.images.values() for p in pieces
    )
    for plane in planes_meeting_box(box, m):
        for simplex in tops:
            pieces = lattice_map.images.get(simplex, [])
            top_best = max(
                (_piece_plane_dim(p, plane, rasterize=False)
                 for p in pieces if p.dim == d),
                default=-1,
            )
            if top_best == d:
                per_simplex[simplex] += 1
                plane_incidence[plane] = plane_incidence.get(plane, 0) + 1
            if aux and any(
                _piece_plane_dim(p, plane, rasterize=False) >= 0 for p in pieces
            ):
                aux_planes[plane] = aux_planes.get(plane, 0) + 1
    histogram: dict[int, int] = {}
    for count in plane_incidence.values():
        histogram[count] = histogram.get(count, 0) + 1
    if aux:
        touch_per_simplex: dict = {s: 0 for s in tops}
        for plane in planes_meeting_box(box, m):
            for simplex in tops:
                pieces = lattice_map.images.get(simplex, [])
                if any(_piece_plane_dim(p, plane, rasterize=False) >= 0
                       for p in pieces):
                    touch_per_simplex[simplex] += 1
        aux_touch_max = max(touch_per_simplex.values(), default=0)
    return SparsityCertificate(
        skeletal_ok=skeletal_ok,
        max_planes_per_simplex=max(per_simplex.values(), default=0),
        max_simplices_per_plane=max(plane_incidence.values(), default=0),
        box=box,
        conservative=conservative,
        per_plane_histogram=histogram,
        aux_max_planes_touching_per_simplex=aux_touch_max,
        aux_max_simplices_touching_plane=(
            max(aux_planes.values(), default=0) if aux else None
        ),
        violations=violations,
    )


# -- unit-ball census ------------------------------------------------------------

def _cell_ball_near(cell_lo, cell_hi, center) -> bool:
    dist2 = 0.0
    for lo, hi, c in zip(cell_lo, cell_hi, center):
        if c < lo:
            dist2 += (lo - c) ** 2
        elif c > hi:
            dist2 += (c - hi) ** 2
        if dist2 > 1.0:
            return False
    return dist2 <= 1.0


def unit_ball_census(lattice_map: LatticeMap) -> int:
    """Max, over unit balls centered at lattice points of the final box, of
    the number of simplices whose image meets the ball (conservative for
    symbolic pieces, which stand in by their bounding boxes)."""
    box = bbox_of_pieces(p for pieces in lattice_map.images.values() for p in pieces)
    if box is None:
        return 0
    counts: dict[tuple, int] = {}
    last: dict[tuple, int] = {}
    for sid, (simplex, pieces) in enumerate(sorted(
            lattice_map.images.items(), key=lambda kv: (len(kv[0]), kv[0]))):
        boxes = []
        for piece in pieces:
            if piece.is_exact:
                boxes.extend((c.bbox().lo, c.bbox().hi) for c in piece.cells())
            else:
                b = piece.bbox()
                boxes.append((b.lo, b.hi))
        for lo, hi in boxes:
            ranges = [
                range(max(l - 1, bl), min(h + 1, bh) + 1)
                for l, h, bl, bh in zip(lo, hi, box.lo, box.hi)
            ]
            for center in product(*ranges):
                if not _cell_ball_near(lo, hi, center):
                    continue
                if last.get(center) == sid:
                    continue
                last[center] = sid
                counts[center] = counts.get(center, 0) + 1
    return max(counts.values(), default=0)


def certificate_to_json(cert: SparsityCertificate) -> dict:
    return cert.to_json()
