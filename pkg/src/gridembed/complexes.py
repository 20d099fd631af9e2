"""Finite simplicial complexes with bounded vertex degree.

A complex is stored as the full set of its simplices (downward closed),
each simplex being a sorted tuple of distinct vertex indices.  Vertices
are ``0 .. vertex_count-1``; the degree of a vertex counts *every*
simplex containing it, including the vertex itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from gridembed.errors import (
    EmptyInput,
    InvalidSimplex,
    NotAGraph,
    VertexOutOfRange,
    ZeroDimensional,
)

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """A downward-closed set of simplices over vertices 0..V-1."""

    dim: int
    vertex_count: int
    simplices: tuple[Simplex, ...]
    _by_dim: dict[int, tuple[Simplex, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        by_dim: dict[int, list[Simplex]] = {}
        for s in self.simplices:
            by_dim.setdefault(len(s) - 1, []).append(s)
        object.__setattr__(
            self, "_by_dim", {k: tuple(v) for k, v in by_dim.items()}
        )

    def simplices_of_dim(self, k: int) -> tuple[Simplex, ...]:
        return self._by_dim.get(k, ())

    @property
    def simplex_set(self) -> frozenset[Simplex]:
        return frozenset(self.simplices)

    def skeleton(self, k: int) -> "SimplicialComplex":
        """The subcomplex of simplices of dimension <= k, same vertex set."""
        kept = tuple(s for s in self.simplices if len(s) - 1 <= k)
        top = max((len(s) - 1 for s in kept), default=0)
        return SimplicialComplex(dim=top, vertex_count=self.vertex_count, simplices=kept)

    def max_degree(self) -> int:
        counts = [0] * self.vertex_count
        for s in self.simplices:
            for v in s:
                counts[v] += 1
        return max(counts, default=0)


def _close_downward(tuples: list[Simplex]) -> list[Simplex]:
    seen: set[Simplex] = set()
    out: list[Simplex] = []
    stack = list(tuples)
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        out.append(s)
        if len(s) > 1:
            for face in combinations(s, len(s) - 1):
                if face not in seen:
                    stack.append(face)
    out.sort(key=lambda s: (len(s), s))
    return out


def build_complex(raw_simplices: list) -> SimplicialComplex:
    """Build the downward closure of the given vertex tuples.

    Input tuples need not be face-closed or sorted; repeated vertex
    indices inside one tuple are rejected.
    """
    if not raw_simplices:
        raise EmptyInput("no simplices given")
    normalized: list[Simplex] = []
    for t in raw_simplices:
        tup = tuple(int(v) for v in t)
        if not tup:
            raise InvalidSimplex("empty simplex tuple")
        if min(tup) < 0:
            raise InvalidSimplex(f"negative vertex index in {tup}")
        if len(set(tup)) != len(tup):
            raise InvalidSimplex(f"repeated vertex index in {tup}")
        normalized.append(tuple(sorted(tup)))
    closed = _close_downward(normalized)
    vmax = max(s[-1] for s in closed)
    dim = max(len(s) for s in closed) - 1
    return SimplicialComplex(dim=dim, vertex_count=vmax + 1, simplices=tuple(closed))


def empty_complex() -> SimplicialComplex:
    """The complex with no vertices and no simplices."""
    return SimplicialComplex(dim=0, vertex_count=0, simplices=())


def degree(Y: SimplicialComplex, v: int) -> int:
    """Number of simplices of the complex (of all dimensions) containing v."""
    if not 0 <= v < Y.vertex_count:
        raise VertexOutOfRange(f"vertex {v} not in [0, {Y.vertex_count})")
    return sum(1 for s in Y.simplices if v in s)


def boundary(simplex: Simplex) -> list[Simplex]:
    """The codimension-1 faces, dropping one vertex each (ascending drop index)."""
    if len(simplex) < 2:
        raise ZeroDimensional(f"simplex {simplex} has no boundary faces")
    return [tuple(simplex[j] for j in range(len(simplex)) if j != i)
            for i in range(len(simplex))]


def proper_faces(simplex: Simplex) -> list[Simplex]:
    """All proper faces of a simplex, every dimension, sorted."""
    out: list[Simplex] = []
    for size in range(1, len(simplex)):
        out.extend(combinations(simplex, size))
    out.sort(key=lambda s: (len(s), s))
    return out


def subdivide_edges(
    Y: SimplicialComplex,
    cut_points: dict[Simplex, list[Fraction]],
) -> tuple[SimplicialComplex, dict[int, tuple[Simplex, Fraction]]]:
    """Replace each cut edge by a chain of edges through new vertices.

    ``cut_points`` maps an edge (sorted pair) to fractions strictly inside
    (0, 1), measured from the smaller-index endpoint.  Returns the new
    complex and a provenance map ``new_vertex -> (original edge, fraction)``.
    """
    if Y.dim != 1:
        raise NotAGraph(f"subdivide_edges needs a graph, got dim {Y.dim}")
    edges = list(Y.simplices_of_dim(1))
    for e in cut_points:
        if tuple(sorted(e)) not in Y.simplex_set:
            raise VertexOutOfRange(f"cut on unknown edge {e}")
    next_vid = Y.vertex_count
    provenance: dict[int, tuple[Simplex, Fraction]] = {}
    new_edges: list[Simplex] = []
    for e in edges:
        cuts = sorted(Fraction(c) for c in cut_points.get(e, ()))
        if any(not (0 < c < 1) for c in cuts):
            raise InvalidSimplex(f"cut fraction outside (0,1) on edge {e}")
        if len(set(cuts)) != len(cuts):
            raise InvalidSimplex(f"duplicate cut fraction on edge {e}")
        if not cuts:
            new_edges.append(e)
            continue
        chain = [e[0]]
        for c in cuts:
            provenance[next_vid] = (e, c)
            chain.append(next_vid)
            next_vid += 1
        chain.append(e[1])
        for a, b in zip(chain, chain[1:]):
            new_edges.append(tuple(sorted((a, b))))
    # keep every original vertex (isolated ones included) plus the new ones
    verts = [(v,) for v in range(Y.vertex_count)
             if (v,) in Y.simplex_set] + [(v,) for v in range(Y.vertex_count, next_vid)]
    all_simplices = sorted(set(verts) | set(new_edges), key=lambda s: (len(s), s))
    Y2 = SimplicialComplex(dim=1, vertex_count=next_vid, simplices=tuple(all_simplices))
    return Y2, provenance


def connected_components(Y: SimplicialComplex) -> int:
    """Number of connected components (union-find over simplex vertex pairs)."""
    parent = list(range(Y.vertex_count))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    present = set()
    for s in Y.simplices:
        present.update(s)
        for a, b in zip(s, s[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return len({find(v) for v in present})


# -- JSON ----------------------------------------------------------------------

def complex_to_json(Y: SimplicialComplex) -> dict:
    return {
        "d": Y.dim,
        "V": Y.vertex_count,
        "simplices": [list(s) for s in Y.simplices],
    }


def complex_from_json(data: dict) -> SimplicialComplex:
    """Load a complex; simplices may be maximal-only, closure is computed."""
    simplices = data.get("simplices", [])
    if not simplices:
        return empty_complex()
    Y = build_complex(simplices)
    declared_v = data.get("V")
    if declared_v is not None and int(declared_v) > Y.vertex_count:
        # allow trailing isolated vertices only if they are listed; a bare
        # count above the max index would leave vertices without simplices
        raise InvalidSimplex(
            f"declared V={declared_v} exceeds max vertex index + 1 = {Y.vertex_count}"
        )
    return Y


def load_complex(path: str) -> SimplicialComplex:
    with open(path) as fh:
        return complex_from_json(json.load(fh))


def save_complex(Y: SimplicialComplex, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(complex_to_json(Y), fh)
