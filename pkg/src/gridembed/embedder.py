"""Full embedding driver: place the vertices, then extend one grade per level.

Level 0 places the vertex set into a low-dimensional sub-box by the
greedy collision-free placement; level k lifts the previous map into the
bottom slab of one more ambient dimension and extends it over the
k-skeleton.  A geometric doubling wrapper retries with larger trial
constants whenever the greedy labeler runs out of range.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from gridembed.complexes import SimplicialComplex, Simplex, complex_from_json
from gridembed.errors import (
    LabelRangeExhausted,
    ParseError,
    RetryBudgetExhausted,
    UnsatisfiableParameters,
)
from gridembed.extension import ExtensionConstants, SkeletonMap, extend
from gridembed.geometry import (
    BoundingBox,
    GeomPiece,
    Point,
    bbox_of_pieces,
    pieces_from_json,
    pieces_to_json,
)
from gridembed.placement import default_config, greedy_place


@dataclass
class LatticeMap:
    """A complete embedding: per-simplex piece lists plus bookkeeping."""

    complex: SimplicialComplex
    n: int
    m: int
    images: dict[Simplex, list[GeomPiece]]
    achieved_box: BoundingBox
    constants_log: list = field(default_factory=list)

    @property
    def box_side(self) -> int:
        return self.achieved_box.side

    def achieved_constant(self) -> float:
        """Box side divided by V^(1/(n-m)); the measured size constant."""
        v = max(self.complex.vertex_count, 2)
        if self.n == self.m:
            return float(self.box_side)
        return self.box_side / v ** (1.0 / (self.n - self.m))


def _lift_images(images: dict[Simplex, list[GeomPiece]], value: int = 0):
    return {s: [p.append_axis(value) for p in pieces] for s, pieces in images.items()}


def embed(
    Y: SimplicialComplex,
    m: int,
    n: int,
    constants: ExtensionConstants = ExtensionConstants(),
    tie_break="lex",
) -> LatticeMap:
    """Embed a d-complex at sparsity grade m into an n-box, skeleton by skeleton."""
    d = Y.dim
    if not 0 <= d <= m <= n:
        raise UnsatisfiableParameters(f"need 0 <= d <= m <= n, got ({d}, {m}, {n})")
    if Y.vertex_count == 0:
        box = BoundingBox(tuple([0] * n), tuple([0] * n))
        return LatticeMap(Y, n, m, {}, box, [{"empty": True}])
    if n == d and Y.vertex_count > 1:
        raise UnsatisfiableParameters(
            "ambient dimension must exceed the complex dimension for V > 1"
        )
    trace: list = []
    m0, n0 = m - d, n - d
    config = default_config(n0, m0, Y.vertex_count)
    placement = greedy_place(Y.vertex_count, config, tie_break=tie_break)
    trace.append({
        "d": 0, "m": m0, "n": n0, "V": Y.vertex_count,
        "side_constant": config.side_constant, "box_side": config.box_side,
    })
    images: dict[Simplex, list[GeomPiece]] = {}
    for v in range(Y.vertex_count):
        if (v,) in Y.simplex_set:
            images[(v,)] = [Point(placement.coords[v])]
    current = SkeletonMap(Y.skeleton(0), n0, m0, images)
    for k in range(1, d + 1):
        lifted = SkeletonMap(
            complex=current.complex,
            n=current.n + 1,
            m=current.m,
            images=_lift_images(current.images),
        )
        skel = Y.skeleton(k)
        if skel.simplices_of_dim(k):
            current = extend(skel, SkeletonMap(skel, lifted.n, lifted.m,
                                               lifted.images), constants, trace)
        else:
            current = SkeletonMap(skel, lifted.n, lifted.m + 1, lifted.images)
    box = bbox_of_pieces(p for pieces in current.images.values() for p in pieces)
    if box is None:
        box = BoundingBox(tuple([0] * n), tuple([0] * n))
    v = max(Y.vertex_count, 2)
    exponent = 1.0 / (n - m) if n > m else None
    trace.append({
        "level": "final", "box_side": box.side,
        "size_exponent": exponent,
        "achieved_constant": (box.side / v**exponent) if exponent else None,
    })
    return LatticeMap(Y, n, m, dict(current.images), box, trace)


def embed_with_retries(
    Y: SimplicialComplex,
    m: int,
    n: int,
    retry_budget: int = 8,
    constants: ExtensionConstants = ExtensionConstants(),
    tie_break="lex",
) -> LatticeMap:
    """Double the trial label constant on exhaustion, up to the budget."""
    trial = constants
    last_error: Exception | None = None
    for attempt in range(max(retry_budget, 0) + 1):
        try:
            result = embed(Y, m, n, constants=trial, tie_break=tie_break)
            result.constants_log.append({
                "retries": attempt,
                "label_constant": trial.label_constant,
            })
            return result
        except LabelRangeExhausted as err:
            last_error = err
            trial = ExtensionConstants(
                label_constant=trial.label_constant * 2,
                base_case_cap=trial.base_case_cap,
                shuffle_seed=trial.shuffle_seed,
            )
    raise RetryBudgetExhausted(
        f"no success after {retry_budget} doublings: {last_error}"
    )


# -- JSON ------------------------------------------------------------------------

def simplex_key(s: Simplex) -> str:
    return ",".join(str(v) for v in s)


def simplex_from_key(key: str) -> Simplex:
    return tuple(int(v) for v in key.split(","))


def lattice_map_to_json(lm: LatticeMap) -> dict:
    from gridembed.complexes import complex_to_json

    return {
        "n": lm.n,
        "m": lm.m,
        "box": lm.achieved_box.to_json(),
        "complex": complex_to_json(lm.complex),
        "images": {
            simplex_key(s): pieces_to_json(pieces)
            for s, pieces in sorted(lm.images.items(), key=lambda kv: (len(kv[0]), kv[0]))
        },
        "constants_log": lm.constants_log,
    }


def lattice_map_from_json(data: dict) -> LatticeMap:
    try:
        Y = complex_from_json(data["complex"])
        images = {
            simplex_from_key(key): pieces_from_json(pieces)
            for key, pieces in data["images"].items()
        }
        box = BoundingBox(
            tuple(int(pair[0]) for pair in data["box"]),
            tuple(int(pair[1]) for pair in data["box"]),
        )
        return LatticeMap(Y, int(data["n"]), int(data["m"]), images, box,
                          list(data.get("constants_log", [])))
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError(f"bad embedding JSON: {err}") from err


def save_lattice_map(lm: LatticeMap, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(lattice_map_to_json(lm), fh)


def load_lattice_map(path: str) -> LatticeMap:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise ParseError(f"bad JSON in {path}: {err}") from err
    return lattice_map_from_json(data)
