"""Benchmark families: packing k-coloring direct encodings and pigeonhole."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .cnf import Formula

Tile = tuple[int, int]


@dataclass(frozen=True)
class PackingSpec:
    r: int
    k: int
    center_color: int | None = None  # defaults to k

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("radius must be >= 0")
        if self.k < 1:
            raise ValueError("need at least one color")
        if not 1 <= self.color <= self.k:
            raise ValueError(f"center color {self.center_color} outside 1..{self.k}")

    @property
    def color(self) -> int:
        return self.k if self.center_color is None else self.center_color


@dataclass(frozen=True)
class PigeonholeSpec:
    pigeons: int
    holes: int

    def __post_init__(self):
        if self.pigeons < 1 or self.holes < 1:
            raise ValueError("pigeons and holes must be >= 1")


@dataclass(frozen=True)
class LegendEntry:
    var: int
    tile: Tile
    color: int


def taxicab(i: Tile, j: Tile) -> int:
    return abs(i[0] - j[0]) + abs(i[1] - j[1])


def grid_tiles(r: int) -> list[Tile]:
    """Tiles of the radius-*r* taxicab ball in reading order.

    Rows run from top (y = r) to bottom, left to right within a row.
    """
    return [(x, y)
            for y in range(r, -r - 1, -1)
            for x in range(-r, r + 1)
            if abs(x) + abs(y) <= r]


def gen_packing(spec: PackingSpec) -> tuple[Formula, list[LegendEntry]]:
    """Direct encoding of the packing k-coloring of the radius-r grid.

    Variable for (tile index t, color c) is ``t*k + c``.
    """
    tiles = grid_tiles(spec.r)
    k = spec.k

    def v(t: int, c: int) -> int:
        return t * k + c

    f = Formula(len(tiles) * k)
    for t in range(len(tiles)):
        f.add_clause([v(t, c) for c in range(1, k + 1)])
    for (ti, i), (tj, j) in combinations(enumerate(tiles), 2):
        for c in range(taxicab(i, j), k + 1):
            f.add_clause([-v(ti, c), -v(tj, c)])
    f.add_clause([v(tiles.index((0, 0)), spec.color)])

    legend = [LegendEntry(v(t, c), tile, c)
              for t, tile in enumerate(tiles) for c in range(1, k + 1)]
    return f, legend


def legend_comments(legend: list[LegendEntry]) -> list[str]:
    return [f"legend {e.var} {e.tile[0]} {e.tile[1]} {e.color}" for e in legend]


def gen_php(spec: PigeonholeSpec) -> Formula:
    """Pigeonhole formula; variable for (pigeon i, hole j) is ``i*holes + j + 1``."""
    p, h = spec.pigeons, spec.holes
    f = Formula(p * h)
    for i in range(p):
        f.add_clause([i * h + j + 1 for j in range(h)])
    for j in range(h):
        for a, b in combinations(range(p), 2):
            f.add_clause([-(a * h + j + 1), -(b * h + j + 1)])
    return f
