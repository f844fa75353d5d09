"""Seeded formula randomization.

Steps, in order: variable renaming, per-variable polarity flips, clause
reordering, literal shuffling inside each clause.  The result is always
re-normalized, so the last step only changes the random stream (clauses
are stored sorted); it is kept so seeds stay comparable across options.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from .cnf import Clause, Formula, normalize_clause


@dataclass(frozen=True)
class ScrambleConfig:
    seed: int = 0
    permute_vars: bool = True
    permute_clauses: bool = True
    shuffle_within_clause: bool = False
    flip_prob: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.flip_prob <= 1.0:
            raise ValueError(f"flip_prob {self.flip_prob} not in [0, 1]")


@dataclass(frozen=True)
class ScrambleRecord:
    """Maps original variable v to ``perm[v]`` (index 0 unused), negated if v in *flipped*."""

    perm: tuple[int, ...]
    flipped: frozenset[int]
    clause_order: tuple[int, ...]  # output position -> input live-clause position

    def map_lit(self, lit: int) -> int:
        v = abs(lit)
        out = self.perm[v] if lit > 0 else -self.perm[v]
        return -out if v in self.flipped else out

    def inverse(self) -> dict[int, int]:
        """Output literal -> original literal, for every mapped literal."""
        inv = {}
        for v in range(1, len(self.perm)):
            inv[self.map_lit(v)] = v
            inv[self.map_lit(-v)] = -v
        return inv

    def restore(self, f: Formula) -> Formula:
        inv = self.inverse()
        out = Formula(len(self.perm) - 1)
        for c in f.live_clauses():
            out.add_clause(inv.get(lit, lit) for lit in c)
        return out

    def comments(self, cfg: ScrambleConfig) -> list[str]:
        lines = [f"scramble seed={cfg.seed} permute_vars={int(cfg.permute_vars)} "
                 f"permute_clauses={int(cfg.permute_clauses)} "
                 f"shuffle_literals={int(cfg.shuffle_within_clause)} "
                 f"flip_prob={cfg.flip_prob}"]
        lines += [f"map {v} {self.perm[v]} {int(v in self.flipped)}"
                  for v in range(1, len(self.perm))]
        return lines


def scramble(f: Formula, cfg: ScrambleConfig) -> tuple[Formula, ScrambleRecord]:
    rng = random.Random(cfg.seed)
    n = f.num_vars
    perm = list(range(n + 1))
    if cfg.permute_vars:
        tail = perm[1:]
        rng.shuffle(tail)
        perm[1:] = tail
    flipped = frozenset(v for v in range(1, n + 1)
                        if cfg.flip_prob > 0 and rng.random() < cfg.flip_prob)
    rec_partial = ScrambleRecord(tuple(perm), flipped, ())

    clauses = f.live_clauses()
    order = list(range(len(clauses)))
    if cfg.permute_clauses:
        rng.shuffle(order)
    out = Formula(n)
    for pos in order:
        lits = [rec_partial.map_lit(lit) for lit in clauses[pos]]
        if cfg.shuffle_within_clause:
            rng.shuffle(lits)
        out.add_clause(lits)
    return out, ScrambleRecord(tuple(perm), flipped, tuple(order))


def clause_multiset(f: Formula) -> Counter[Clause]:
    return Counter(normalize_clause(c) for c in f.live_clauses())
