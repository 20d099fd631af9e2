"""Extending a skeleton map to the top-dimensional simplices.

Given a map of the (d-1)-skeleton into the bottom slab ``{last coord 0}``
of an n-box whose plane incidences are already sparse, each d-simplex is
filled by routing through a private horizontal layer:

1. every d-simplex gets an integer label, chosen greedily so that two
   simplices sharing a label never share a plane that meets both of
   their boundary images (d-1)-dimensionally;
2. the boundary image is swept vertically up to the layer at the label's
   height, then swept sideways to the wall ``{second-to-last coord 0}``;
3. the projected boundaries of one label class form an easier instance
   one ambient dimension down, which is filled recursively inside the
   layer; the recursion bottoms out in an iterated project-and-cone
   filling once every coordinate is needed by a plane.

Labels exist within the trial range R unless the driving constant was
too small, in which case LabelRangeExhausted asks the caller to double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gridembed.complexes import SimplicialComplex, Simplex, proper_faces
from gridembed.errors import (
    LabelRangeExhausted,
    PieceNotInHyperplane,
    SizePreconditionViolated,
    SparsityViolated,
    UnsatisfiableParameters,
)
from gridembed.geometry import (
    GeomPiece,
    MPlane,
    Point,
    bbox_of_pieces,
    cone_over,
    Cone,
    planes_hit_in_dim,
    prism_between,
    project,
    shadow_sweep,
    simplify_pieces,
)


@dataclass(frozen=True)
class SkeletonMap:
    """Images of every simplex of (a skeleton of) a complex in R^n.

    ``m`` is the declared plane-sparsity grade of the map; images are
    lists of geometric pieces per simplex.
    """

    complex: SimplicialComplex
    n: int
    m: int
    images: dict[Simplex, list[GeomPiece]]

    def pieces_of(self, simplex: Simplex) -> list[GeomPiece]:
        return self.images[simplex]

    def covers_skeleton(self, k: int) -> bool:
        return all(s in self.images for s in self.complex.simplices
                   if len(s) - 1 <= k)

    def skeletal_violations(self) -> list[Simplex]:
        """Simplices whose pieces exceed the simplex dimension."""
        bad = []
        for s, pieces in self.images.items():
            k = len(s) - 1
            if any(p.dim > k for p in pieces):
                bad.append(s)
        return bad


@dataclass(frozen=True)
class ExtensionConstants:
    """Trial constants for the greedy label range and the base-case cap."""

    label_constant: float = 4.0
    base_case_cap: int = 4096
    shuffle_seed: int | None = None


@dataclass(frozen=True)
class Labeling:
    labels: dict[Simplex, int]
    R: int


@dataclass
class LabelClassComplex:
    """One label class, rebuilt as a disjoint union of simplex closures.

    The class domain duplicates shared faces on purpose; ``images`` is the
    class map after moving to the layer and projecting to the wall, living
    one ambient dimension down (the fixed layer height is ``height``).
    """

    label: int
    height: int
    members: list[Simplex]
    domain: SimplicialComplex
    images: dict[Simplex, list[GeomPiece]]
    top_copies: dict[Simplex, Simplex]
    vertex_bound_constant: float


def as_piece_list(obj) -> list[GeomPiece]:
    return list(obj) if isinstance(obj, list) else [obj]


def boundary_plane_set(
    Y: SimplicialComplex, f: SkeletonMap, simplex: Simplex, m: int
) -> frozenset[MPlane]:
    """Planes with m free axes meeting the boundary image (d-1)-dimensionally."""
    d = len(simplex) - 1
    out: set[MPlane] = set()
    for face in proper_faces(simplex):
        for piece in f.images[face]:
            if piece.dim == d - 1:
                hits, _ = planes_hit_in_dim(piece, m, d - 1)
                out.update(hits)
    return frozenset(out)


def _top_simplices(Y: SimplicialComplex, constants: ExtensionConstants):
    tops = list(Y.simplices_of_dim(Y.dim))
    if constants.shuffle_seed is not None:
        import random

        random.Random(constants.shuffle_seed).shuffle(tops)
    return tops


def label_simplices(
    Y: SimplicialComplex,
    f: SkeletonMap,
    R: int,
    constants: ExtensionConstants = ExtensionConstants(),
) -> Labeling:
    """Greedy labels in [1, R]; a label is bad for a simplex if an earlier
    simplex with that label shares a plane meeting both boundary images in
    dimension d-1."""
    m = f.m + 1
    labels: dict[Simplex, int] = {}
    plane_labels: dict[MPlane, set[int]] = {}
    for simplex in _top_simplices(Y, constants):
        planes = boundary_plane_set(Y, f, simplex, m)
        bad: set[int] = set()
        for plane in planes:
            bad.update(plane_labels.get(plane, ()))
        j = 1
        while j in bad:
            j += 1
        if j > R:
            raise LabelRangeExhausted(
                f"needed label {j} > R={R} for simplex {simplex}"
            )
        labels[simplex] = j
        for plane in planes:
            plane_labels.setdefault(plane, set()).add(j)
    return Labeling(labels=labels, R=R)


def build_label_class(
    Y: SimplicialComplex,
    f: SkeletonMap,
    labeling: Labeling,
    j: int,
) -> LabelClassComplex:
    """Assemble the disjoint-union domain and the projected class map."""
    d = Y.dim
    n = f.n
    m = f.m + 1
    members = [s for s in Y.simplices_of_dim(d) if labeling.labels.get(s) == j]
    # internal consistency: no plane may meet two member boundaries
    seen: dict[MPlane, Simplex] = {}
    for s in members:
        for plane in boundary_plane_set(Y, f, s, m):
            if plane in seen and seen[plane] != s:
                raise SparsityViolated(
                    f"label {j}: plane {plane} meets boundaries of both "
                    f"{seen[plane]} and {s}"
                )
            seen[plane] = s
    simplices: list[Simplex] = []
    images: dict[Simplex, list[GeomPiece]] = {}
    top_copies: dict[Simplex, Simplex] = {}
    for i, s in enumerate(members):
        relabel = {v: i * (d + 1) + k for k, v in enumerate(s)}
        copy_top = tuple(relabel[v] for v in s)
        simplices.append(copy_top)
        top_copies[s] = copy_top
        for face in proper_faces(s):
            copy_face = tuple(relabel[v] for v in face)
            simplices.append(copy_face)
            moved: list[GeomPiece] = []
            for piece in f.images[face]:
                flat = piece.drop_axis(n - 1)
                moved.extend(as_piece_list(project(flat, n - 2, 0)))
            images[copy_face] = moved
    domain = SimplicialComplex(
        dim=d,
        vertex_count=(d + 1) * len(members),
        simplices=tuple(sorted(simplices, key=lambda s: (len(s), s))),
    ) if members else SimplicialComplex(dim=d, vertex_count=0, simplices=())
    v = max(Y.vertex_count, 2)
    exponent = (n - m - 1) / (n - m) if n > m else 0.0
    denom = v**exponent if exponent > 0 else 1.0
    bound_constant = domain.vertex_count / denom
    return LabelClassComplex(
        label=j,
        height=j,
        members=members,
        domain=domain,
        images=images,
        top_copies=top_copies,
        vertex_bound_constant=bound_constant,
    )


def _check_bottom_slab(f: SkeletonMap) -> None:
    box = bbox_of_pieces(p for pieces in f.images.values() for p in pieces)
    if box is None:
        return
    axis = f.n - 1
    if box.lo[axis] != 0 or box.hi[axis] != 0:
        raise PieceNotInHyperplane(
            f"hypothesis image must sit at coordinate {axis} == 0"
        )


def fill_base_case(
    f: SkeletonMap, constants: ExtensionConstants = ExtensionConstants()
) -> SkeletonMap:
    """Fill every top simplex by iterated axis sweeps and a final cone.

    Works when every coordinate direction is needed by a plane (the
    target sparsity grade equals the ambient dimension); only small
    complexes reach this case, which the cap enforces.
    """
    Y = f.complex
    d = Y.dim
    n = f.n
    if f.m + 1 != n:
        raise UnsatisfiableParameters(
            f"base-case filling needs target grade == ambient, got "
            f"{f.m + 1} != {n}"
        )
    if d < 1:
        raise UnsatisfiableParameters("base-case filling needs d >= 1")
    if Y.vertex_count > constants.base_case_cap:
        raise SizePreconditionViolated(
            f"V={Y.vertex_count} exceeds the inherited cap "
            f"{constants.base_case_cap}"
        )
    out = dict(f.images)
    for simplex in Y.simplices_of_dim(d):
        cur: list[GeomPiece] = []
        for face in proper_faces(simplex):
            cur.extend(f.images[face])
        pieces: list[GeomPiece] = []
        for axis in range(n - d + 1):
            for piece in cur:
                pieces.extend(shadow_sweep(piece, axis, 0))
            nxt: list[GeomPiece] = []
            for piece in cur:
                nxt.extend(as_piece_list(project(piece, axis, 0)))
            cur = simplify_pieces(nxt)
        pieces.extend(_cone_off(cur))
        out[simplex] = simplify_pieces(pieces)
    return SkeletonMap(complex=Y, n=n, m=n, images=out)


def _cone_off(pieces: list[GeomPiece]) -> list[GeomPiece]:
    """Cone a family of pieces from the least lattice vertex of the family."""
    if not pieces:
        return []
    apex = None
    for piece in pieces:
        if piece.is_exact:
            for cell in piece.cells():
                for v in cell.vertices():
                    if apex is None or v < apex:
                        apex = v
    if apex is None:
        apex = pieces[0].bbox().lo
    out: list[GeomPiece] = []
    for piece in pieces:
        if isinstance(piece, Point):
            out.append(piece if piece.coords == apex else Cone(piece, apex))
        elif piece.contains_point(apex):
            out.append(cone_over(piece, apex))
        else:
            # joint apex for the whole family; soundness does not need
            # the apex to touch every component
            out.append(Cone(piece, apex))
    return out


def extend(
    Y: SimplicialComplex,
    f: SkeletonMap,
    constants: ExtensionConstants = ExtensionConstants(),
    trace: list | None = None,
) -> SkeletonMap:
    """Extend a skeleton map over the top simplices, one grade up.

    The result restricts to ``f`` on the lower skeleton, object for
    object.  Raises LabelRangeExhausted when the trial constant is too
    small for the greedy labeler.
    """
    d = Y.dim
    n = f.n
    m = f.m + 1
    if d < 1 or m < 1 or m > n or d > m:
        raise UnsatisfiableParameters(f"cannot extend with d={d}, m={m}, n={n}")
    if not f.covers_skeleton(d - 1):
        raise UnsatisfiableParameters("hypothesis map must cover the lower skeleton")
    tops = Y.simplices_of_dim(d)
    if not tops:
        return SkeletonMap(complex=Y, n=n, m=m, images=dict(f.images))
    if m == n:
        result = fill_base_case(f, constants)
        if trace is not None:
            trace.append({"d": d, "m": m, "n": n, "V": Y.vertex_count,
                          "base_case": True})
        return result
    _check_bottom_slab(f)
    V = max(Y.vertex_count, 2)
    R = max(1, math.ceil(constants.label_constant * V ** (1.0 / (n - m))))
    labeling = label_simplices(Y, f, R, constants)
    used = sorted(set(labeling.labels.values()))
    out = dict(f.images)
    max_class = 0
    for j in used:
        lcc = build_label_class(Y, f, labeling, j)
        max_class = max(max_class, len(lcc.members))
        rec_f = SkeletonMap(complex=lcc.domain, n=n - 1, m=m - 1, images=lcc.images)
        filled = extend(lcc.domain, rec_f, constants, trace)
        for simplex in lcc.members:
            pieces: list[GeomPiece] = []
            for face in proper_faces(simplex):
                for piece in f.images[face]:
                    pieces.append(prism_between(piece, n - 1, 0, j))
                    at_layer = project(piece, n - 1, j)
                    for moved in as_piece_list(at_layer):
                        pieces.extend(shadow_sweep(moved, n - 2, 0))
            copy_top = lcc.top_copies[simplex]
            for piece in filled.images[copy_top]:
                pieces.append(piece.append_axis(j))
            out[simplex] = simplify_pieces(pieces)
    if trace is not None:
        trace.append({
            "d": d, "m": m, "n": n, "V": Y.vertex_count, "R": R,
            "labels_used": len(used), "max_label": used[-1] if used else 0,
            "max_class_size": max_class,
        })
    return SkeletonMap(complex=Y, n=n, m=m, images=out)
