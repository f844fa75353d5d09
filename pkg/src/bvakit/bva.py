"""Bounded variable addition with pluggable tie-breaking.

A grid is a literal set L and a partial-clause set P such that every
``l | C`` for l in L, C in P is a live clause.  Replacing the grid with a
fresh variable x turns ``|L|*|P|`` clauses into ``|L|+|P|``:
``x | C`` for each C and ``-x | l`` for each l.
"""

from __future__ import annotations

import heapq
import logging
import random
import time
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cnf import (Clause, Formula, OccurrenceIndex, build_occurrence_index,
                  is_tautology, lit_key, normalize_clause)
from .vig import HeuristicOverflowError, Vig, build_vig

log = logging.getLogger(__name__)


class TieBreak(str, Enum):
    SORTED = "sorted"
    RANDOM = "random"
    THREE_HOP = "3hop"


class Condition(str, Enum):
    STRICT_CLAUSE_DECREASE = "strict_clause_decrease"
    VARS_PLUS_CLAUSES = "vars_plus_clauses"


@dataclass
class EngineConfig:
    tiebreak: TieBreak = TieBreak.SORTED
    seed: int = 0
    condition: Condition = Condition.STRICT_CLAUSE_DECREASE
    max_replacements: int | None = None
    time_budget: float | None = None
    freeze_vig: bool = False

    def __post_init__(self):
        self.tiebreak = TieBreak(self.tiebreak)
        self.condition = Condition(self.condition)
        if self.max_replacements is not None and self.max_replacements < 0:
            raise ValueError("max_replacements must be >= 0")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")


class GridError(RuntimeError):
    """A grid cell no longer names a live clause."""


def reduction(n_lits: int, n_partials: int) -> int:
    return n_lits * n_partials - (n_lits + n_partials)


def accept_grid(grid: Grid, cfg: EngineConfig) -> bool:
    nl, np_ = len(grid.lits), len(grid.partials)
    if cfg.condition is Condition.VARS_PLUS_CLAUSES:
        return nl * np_ > nl + np_ + 1
    return nl * np_ > nl + np_


def _usable(clause: Clause) -> bool:
    return len(clause) >= 2 and not is_tautology(clause)


def partial_clauses(f: Formula, idx: OccurrenceIndex, lit: int) -> dict[Clause, int]:
    """``C - {lit}`` for every usable live clause C containing *lit*.

    Maps each partial clause to the id of its (first) source clause.  Unit
    clauses and tautologies are skipped.
    """
    out: dict[Clause, int] = {}
    for cid in idx.ids(lit):
        clause = f.clauses[cid]
        if not _usable(clause):
            continue
        partial = tuple(x for x in clause if x != lit)
        out.setdefault(partial, cid)
    return out


def extensions(f: Formula, idx: OccurrenceIndex, partial: Clause) -> dict[int, int]:
    """Literals m such that ``m | partial`` is a usable live clause, with its id."""
    lmin = min(partial, key=idx.count)
    size = len(partial) + 1
    pset = set(partial)
    out: dict[int, int] = {}
    for cid in idx.ids(lmin):
        clause = f.clauses[cid]
        if len(clause) != size:
            continue
        extra = [x for x in clause if x not in pset]
        if len(extra) == 1 and not is_tautology(clause):
            out.setdefault(extra[0], cid)
    return out


@dataclass
class Grid:
    start: int
    lits: list[int]
    partials: list[Clause]
    # for every C in P: literal m -> id of the live clause (m | C)
    ext: dict[Clause, dict[int, int]]
    overlap: Counter
    trace: list[int] = field(default_factory=list)
    rejected: int | None = None

    @classmethod
    def seed(cls, f: Formula, idx: OccurrenceIndex, start: int) -> Grid:
        partials = list(partial_clauses(f, idx, start))
        ext = {c: extensions(f, idx, c) for c in partials}
        overlap: Counter = Counter()
        for m in ext.values():
            overlap.update(m.keys())
        g = cls(start, [start], partials, ext, overlap)
        g.trace.append(g.reduction)
        return g

    @property
    def reduction(self) -> int:
        return reduction(len(self.lits), len(self.partials))

    def excluded(self) -> set[int]:
        return set(self.lits) | {-x for x in self.lits}

    def extend(self, lit: int) -> None:
        kept = []
        for c in self.partials:
            if lit in self.ext[c]:
                kept.append(c)
            else:
                self.overlap.subtract(self.ext.pop(c).keys())
        self.lits.append(lit)
        self.partials = kept
        self.trace.append(self.reduction)

    def cell(self, lit: int, partial: Clause) -> int:
        return self.ext[partial][lit]

    def cells(self) -> list[int]:
        return [self.ext[c][lit] for lit in self.lits for c in self.partials]


HopFn = Callable[[int], "np.ndarray | None"]


def find_lmax(grid: Grid, mode: TieBreak = TieBreak.SORTED,
              rng: random.Random | None = None,
              hop: HopFn | None = None) -> tuple[int, int] | None:
    """Candidate literal with the largest overlap with P, ties broken per *mode*.

    *hop* maps a variable to its 3-hop row (or None when unavailable).
    """
    excluded = grid.excluded()
    best = 0
    ties: list[int] = []
    for m, cnt in grid.overlap.items():
        if cnt <= 0 or m in excluded:
            continue
        if cnt > best:
            best, ties = cnt, [m]
        elif cnt == best:
            ties.append(m)
    if not ties:
        return None
    ties.sort(key=lit_key)
    if len(ties) == 1 or mode is TieBreak.SORTED:
        return ties[0], best
    if mode is TieBreak.RANDOM:
        if rng is None:
            raise ValueError("random tie-break needs an rng")
        return rng.choice(ties), best
    row = hop(abs(grid.start)) if hop is not None else None
    if row is None:
        return ties[0], best
    n = len(row)
    # max() keeps the first maximum, so the sort order settles remaining ties
    choice = max(ties, key=lambda m: int(row[abs(m)]) if abs(m) < n else 0)
    return choice, best


def grow_grid(f: Formula, idx: OccurrenceIndex, start: int, cfg: EngineConfig,
              rng: random.Random | None = None, hop: HopFn | None = None) -> Grid:
    grid = Grid.seed(f, idx, start)
    while True:
        cand = find_lmax(grid, cfg.tiebreak, rng, hop)
        if cand is None:
            break
        lit, cnt = cand
        new_r = reduction(len(grid.lits) + 1, cnt)
        if new_r <= grid.reduction:
            grid.rejected = new_r
            break
        grid.extend(lit)
    return grid


@dataclass(frozen=True)
class ReplacementRecord:
    new_var: int
    lits: tuple[int, ...]
    partials: tuple[Clause, ...]
    added: tuple[Clause, ...]
    added_ids: tuple[int, ...]
    deleted: tuple[Clause, ...]
    deleted_ids: tuple[int, ...]

    @property
    def net_clause_delta(self) -> int:
        return len(self.added) - len(self.deleted)


def apply_replacement(f: Formula, idx: OccurrenceIndex, grid: Grid,
                      vig: Vig | None = None) -> ReplacementRecord:
    deleted_ids = grid.cells()
    for cid in deleted_ids:
        if not f.live[cid]:
            raise GridError(f"grid cell clause {cid} is not live")
    x = f.new_var()
    added = [normalize_clause((x,) + c) for c in grid.partials]
    added += [normalize_clause((-x, lit)) for lit in grid.lits]
    deleted = []
    for cid in deleted_ids:
        clause = f.clauses[cid]
        f.delete_clause(cid)
        idx.remove(cid, clause)
        deleted.append(clause)
    added_ids = []
    for clause in added:
        cid = f.add_clause(clause)
        idx.add(cid, clause)
        added_ids.append(cid)
    if vig is not None:
        vig.apply_delta(added, deleted)
    return ReplacementRecord(x, tuple(grid.lits), tuple(grid.partials),
                             tuple(added), tuple(added_ids),
                             tuple(deleted), tuple(deleted_ids))


def _queue_key(lit: int) -> tuple[int, int]:
    # equal counts pop the larger variable first, negative before positive
    return (lit, -1) if lit < 0 else (-lit, 0)


class LiteralQueue:
    """Max-queue of literals by occurrence count with lazy re-keying."""

    def __init__(self, count: Callable[[int], int]):
        self._count = count
        self._heap: list[tuple[int, tuple[int, int], int]] = []
        self._key: dict[int, int] = {}

    def push(self, lit: int) -> None:
        c = self._count(lit)
        if self._key.get(lit) == c:
            return
        self._key[lit] = c
        heapq.heappush(self._heap, (-c, _queue_key(lit), lit))

    def pop(self) -> tuple[int, int] | None:
        heap = self._heap
        while heap:
            negc, key, lit = heapq.heappop(heap)
            stored = -negc
            if self._key.get(lit) != stored:
                continue  # superseded by a later push
            current = self._count(lit)
            if current != stored:
                self._key[lit] = current
                heapq.heappush(heap, (-current, key, lit))
                continue
            del self._key[lit]
            return lit, current
        return None

    def __len__(self) -> int:
        return len(self._key)

    def __bool__(self) -> bool:
        return bool(self._key)


@dataclass
class BvaResult:
    formula: Formula
    records: list[ReplacementRecord]
    partial: bool = False
    elapsed: float = 0.0

    def __iter__(self):
        # allows ``formula, records = run_bva(...)``
        return iter((self.formula, self.records))


class BvaEngine:
    """Owns one formula and runs replacements on it in place."""

    def __init__(self, formula: Formula, cfg: EngineConfig | None = None,
                 on_replacement: Callable[[ReplacementRecord], None] | None = None):
        self.cfg = cfg or EngineConfig()
        self.formula = formula
        self.index = build_occurrence_index(formula)
        self.vig = build_vig(formula) if self.cfg.tiebreak is TieBreak.THREE_HOP else None
        self.rng = random.Random(self.cfg.seed)
        self.records: list[ReplacementRecord] = []
        self.on_replacement = on_replacement
        self._hop_cache: dict[int, np.ndarray | None] = {}
        self._overflow_warned = False

    def hop(self, v: int) -> np.ndarray | None:
        if self.vig is None or v > self.vig.n:
            return None
        if v not in self._hop_cache:
            try:
                self._hop_cache[v] = self.vig.three_hop(v)
            except HeuristicOverflowError as exc:
                if not self._overflow_warned:
                    log.warning("%s; falling back to sorted tie-break", exc)
                    self._overflow_warned = True
                self._hop_cache[v] = None
        return self._hop_cache[v]

    def try_literal(self, lit: int) -> ReplacementRecord | None:
        grid = grow_grid(self.formula, self.index, lit, self.cfg, self.rng, self.hop)
        if len(grid.lits) < 2 or not accept_grid(grid, self.cfg):
            return None
        vig = None if self.cfg.freeze_vig else self.vig
        rec = apply_replacement(self.formula, self.index, grid, vig)
        if vig is not None:
            self._hop_cache.clear()
        self.records.append(rec)
        if self.on_replacement is not None:
            self.on_replacement(rec)
        return rec

    def run(self) -> BvaResult:
        cfg = self.cfg
        t0 = time.monotonic()
        deadline = None if cfg.time_budget is None else t0 + cfg.time_budget
        queue = LiteralQueue(self.index.count)
        for lit in sorted(self.index.literals(), key=lit_key):
            queue.push(lit)
        partial = False
        while queue:
            if cfg.max_replacements is not None and len(self.records) >= cfg.max_replacements:
                break
            if deadline is not None and time.monotonic() > deadline:
                partial = True
                log.info("time budget exhausted after %d replacements", len(self.records))
                break
            item = queue.pop()
            if item is None:
                break
            lit, count = item
            if count < 2:
                continue
            rec = self.try_literal(lit)
            if rec is None:
                continue
            touched = {x for c in rec.deleted for x in c}
            touched.update(x for c in rec.added for x in c)
            for x in sorted(touched, key=lit_key):
                queue.push(x)
        return BvaResult(self.formula, self.records, partial, time.monotonic() - t0)


def run_bva(f: Formula, cfg: EngineConfig | None = None, **kwargs) -> BvaResult:
    """Run BVA on a copy of *f*."""
    return BvaEngine(f.copy(), cfg, **kwargs).run()
