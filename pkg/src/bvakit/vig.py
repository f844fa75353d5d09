"""Weighted variable incidence graph and the 3-hop path-count heuristic.

Edge weight ``w(u, v)`` is the number of live clauses mentioning both
variables.  ``H(x, y)`` is entry ``(x, y)`` of the cubed adjacency matrix,
i.e. the number of length-3 walks from x to y where each edge contributes
its weight as a multiplicity.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable
from itertools import combinations
from typing import IO

import numpy as np
import scipy.sparse as sp

from .cnf import Clause, Formula

INT64_MAX = np.iinfo(np.int64).max


class VigConsistencyError(RuntimeError):
    """A delta removed a clause the graph never accounted for."""


class HeuristicOverflowError(OverflowError):
    """Path counts could exceed the int64 range."""


def _clause_vars(clause: Iterable[int]) -> list[int]:
    return sorted({abs(lit) for lit in clause})


class Vig:
    def __init__(self, n: int = 0):
        self.n = n
        self.adj: list[dict[int, int]] = [{} for _ in range(n + 1)]
        self._csr: sp.csr_array | None = None
        self._max_degree = 0

    def _grow(self, n: int) -> None:
        if n > self.n:
            self.adj.extend({} for _ in range(n - self.n))
            self.n = n

    def weight(self, u: int, v: int) -> int:
        if u > self.n or v > self.n:
            return 0
        return self.adj[u].get(v, 0)

    def add_clause(self, clause: Clause) -> None:
        vs = _clause_vars(clause)
        if vs:
            self._grow(vs[-1])
        adj = self.adj
        for u, v in combinations(vs, 2):
            adj[u][v] = adj[u].get(v, 0) + 1
            adj[v][u] = adj[v].get(u, 0) + 1
        self._csr = None

    def remove_clause(self, clause: Clause) -> None:
        vs = _clause_vars(clause)
        adj = self.adj
        for u, v in combinations(vs, 2):
            w = adj[u].get(v, 0) if v <= self.n and u <= self.n else 0
            if w <= 0:
                raise VigConsistencyError(
                    f"edge ({u}, {v}) underflows while removing clause {clause}")
            if w == 1:
                del adj[u][v]
                del adj[v][u]
            else:
                adj[u][v] = w - 1
                adj[v][u] = w - 1
        self._csr = None

    def apply_delta(self, added: Iterable[Clause], removed: Iterable[Clause]) -> Vig:
        for c in removed:
            self.remove_clause(c)
        for c in added:
            self.add_clause(c)
        return self

    def edges(self) -> dict[tuple[int, int], int]:
        return {(u, v): w for u in range(1, self.n + 1)
                for v, w in self.adj[u].items() if u < v}

    def matrix(self) -> sp.csr_array:
        """Adjacency matrix, indices 0..n with row/column 0 unused."""
        if self._csr is None:
            size = self.n + 1
            lens = [len(row) for row in self.adj]
            rows = np.repeat(np.arange(size), lens)
            cols = np.fromiter((v for row in self.adj for v in row),
                               dtype=np.int64, count=int(rows.size))
            vals = np.fromiter((w for row in self.adj for w in row.values()),
                               dtype=np.int64, count=int(rows.size))
            self._csr = sp.csr_array((vals, (rows, cols)), shape=(size, size))
            self._max_degree = int(self._csr.sum(axis=1).max()) if vals.size else 0
        return self._csr

    def three_hop(self, x: int) -> np.ndarray:
        """Row x of A^3 as an int64 vector of length n+1."""
        if not 1 <= x <= self.n:
            raise IndexError(f"variable {x} outside 1..{self.n}")
        a = self.matrix()
        deg_x = sum(self.adj[x].values())
        # every entry of A^3 e_x is bounded by deg(x) * maxdeg^2
        if deg_x * self._max_degree * self._max_degree > INT64_MAX:
            raise HeuristicOverflowError(
                f"3-hop counts from variable {x} may exceed int64")
        vec = np.zeros(self.n + 1, dtype=np.int64)
        vec[x] = 1
        for _ in range(3):
            vec = a @ vec
        return vec

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vig):
            return NotImplemented
        return self.edges() == other.edges()

    def __repr__(self) -> str:
        return f"Vig(n={self.n}, edges={sum(map(len, self.adj)) // 2})"


def build_vig(f: Formula) -> Vig:
    g = Vig(f.num_vars)
    for clause in f.live_clauses():
        g.add_clause(clause)
    return g


def vig_apply_delta(v: Vig, added: Iterable[Clause], removed: Iterable[Clause]) -> Vig:
    return v.apply_delta(added, removed)


def three_hop(v: Vig, x: int) -> np.ndarray:
    return v.three_hop(x)


def heatmap_rows(v: Vig, x: int) -> list[tuple[int, int]]:
    h = v.three_hop(x)
    return [(int(y), int(h[y])) for y in np.flatnonzero(h)]


def export_heatmap(v: Vig, x: int, out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["var", "h"])
    w.writerows(heatmap_rows(v, x))
