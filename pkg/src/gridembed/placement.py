"""Greedy plane-sparse placement of vertices into an integer box.

Places V vertices into ``{0..side}^n`` so that every axis-parallel plane
with m free axes contains at most one vertex.  A counting argument
guarantees the greedy loop never gets stuck once the side constant C
satisfies ``binom(n,m) * C^m < C^n``; the box side is
``ceil(C * V^(1/(n-m)))``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from gridembed.errors import MEqualsN, PlacementExhausted
from gridembed.geometry import MPlane, ceil_root_scaled, planes_through_point

IntPoint = tuple[int, ...]


def min_constant(n: int, m: int) -> int:
    """Smallest integer C with binom(n,m) * C^m < C^n, i.e. C^(n-m) > binom(n,m)."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m} n={n}")
    if m == n:
        raise MEqualsN("no finite box works for unbounded V when m == n")
    c = 1
    while c ** (n - m) <= comb(n, m):
        c += 1
    return c


@dataclass(frozen=True)
class PlacementConfig:
    n: int
    m: int
    side_constant: int
    V: int

    def __post_init__(self) -> None:
        if not 0 <= self.m <= self.n:
            raise ValueError(f"need 0 <= m <= n, got m={self.m} n={self.n}")
        if self.V < 0:
            raise ValueError("V must be nonnegative")
        if self.m == self.n:
            if self.V > 1:
                raise MEqualsN(
                    f"m == n supports at most one vertex, got V={self.V}"
                )
            return
        c = self.side_constant
        if c < 1 or comb(self.n, self.m) * c**self.m >= c**self.n:
            raise ValueError(
                f"side constant {c} violates binom(n,m)*C^m < C^n for "
                f"n={self.n}, m={self.m}"
            )

    @property
    def box_side(self) -> int:
        if self.m == self.n:
            return 0
        return ceil_root_scaled(self.side_constant, max(self.V, 1), self.n - self.m)


def default_config(n: int, m: int, V: int) -> PlacementConfig:
    return PlacementConfig(n=n, m=m, side_constant=min_constant(n, m), V=V)


@dataclass
class VertexPlacement:
    config: PlacementConfig
    coords: list[IntPoint]
    occupied_planes: dict[MPlane, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def m(self) -> int:
        return self.config.m

    def to_json(self) -> dict:
        return {
            "n": self.config.n,
            "m": self.config.m,
            "C": self.config.side_constant,
            "coords": [list(p) for p in self.coords],
        }


def _first_free_lex(n: int, side: int, groups, occupied) -> IntPoint | None:
    """Lexicographically least box point avoiding every occupied plane.

    Depth-first over coordinates; a constraint whose fixed axes all lie in
    the current prefix prunes the whole subtree as soon as it fails.
    """
    prefix: list[int] = []

    def rec(t: int) -> IntPoint | None:
        if t == n:
            return tuple(prefix)
        for v in range(side + 1):
            prefix.append(v)
            ok = True
            for axes in groups[t]:
                key = tuple(prefix[a] for a in axes)
                if key in occupied[axes]:
                    ok = False
                    break
            if ok:
                r = rec(t + 1)
                if r is not None:
                    return r
            prefix.pop()
        return None

    return rec(0)


def greedy_place(V: int, config: PlacementConfig, tie_break="lex") -> VertexPlacement:
    """Place vertices one at a time at the tie-break-least free point.

    ``tie_break`` is ``"lex"`` or ``("random", seed)``; the random order
    draws uniformly among free points, which matches the least element of
    a random total order in distribution.
    """
    n, m = config.n, config.m
    if m == n:
        if V > 1:
            raise MEqualsN("m == n supports at most one vertex")
        return VertexPlacement(config, [tuple([0] * n)][:V])
    side = config.box_side
    fixed_axes = list(combinations(range(n), n - m))
    occupied: dict[tuple[int, ...], set[tuple[int, ...]]] = {
        axes: set() for axes in fixed_axes
    }
    groups: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for axes in fixed_axes:
        groups[max(axes)].append(axes)

    rng = None
    if tie_break != "lex":
        kind, seed = tie_break
        if kind != "random":
            raise ValueError(f"unknown tie break {tie_break!r}")
        rng = random.Random(seed)

    coords: list[IntPoint] = []
    for _ in range(V):
        p: IntPoint | None = None
        if rng is not None:
            for _ in range(2000):
                cand = tuple(rng.randint(0, side) for _ in range(n))
                if all(tuple(cand[a] for a in axes) not in occupied[axes]
                       for axes in fixed_axes):
                    p = cand
                    break
        if p is None:
            p = _first_free_lex(n, side, groups, occupied)
        if p is None:
            raise PlacementExhausted(
                f"no free point left after {len(coords)} of {V} vertices"
            )
        for axes in fixed_axes:
            key = tuple(p[a] for a in axes)
            # the counting argument promises a point on no occupied plane
            assert key not in occupied[axes]
            occupied[axes].add(key)
        coords.append(p)
    placement = VertexPlacement(config, coords)
    for idx, p in enumerate(coords):
        for plane in planes_through_point(p, m):
            placement.occupied_planes[plane] = idx
    return placement


def check_placement(placement: VertexPlacement, config: PlacementConfig) -> bool:
    """Recheck, independently of the greedy bookkeeping, that every plane
    with m free axes contains at most one placed point and all points sit
    inside the configured box."""
    side = config.box_side
    seen: dict[MPlane, int] = {}
    for idx, p in enumerate(placement.coords):
        if len(p) != config.n:
            return False
        if config.m < config.n and not all(0 <= x <= side for x in p):
            return False
        for plane in planes_through_point(p, config.m):
            if plane in seen and seen[plane] != idx:
                return False
            seen[plane] = idx
    return True


def placement_to_json(placement: VertexPlacement) -> dict:
    return placement.to_json()


def placement_from_json(data: dict) -> VertexPlacement:
    config = PlacementConfig(
        n=int(data["n"]), m=int(data["m"]),
        side_constant=int(data["C"]), V=len(data["coords"]),
    )
    return VertexPlacement(config, [tuple(p) for p in data["coords"]])


def save_placement(placement: VertexPlacement, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(placement.to_json(), fh)
