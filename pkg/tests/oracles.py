"""Independent reference computations used by the test suite.

Nothing here imports the engine; only plain clause lists go in.
"""

from __future__ import annotations

import random
from collections import defaultdict
from itertools import combinations


def _var_masks(n: int) -> list[int]:
    """Truth-table bitmask per variable over all 2**n assignments.

    Bit ``a`` of mask i is set iff variable i+1 is true in assignment ``a``.
    """
    total = 1 << n
    masks = []
    for i in range(n):
        half = 1 << i
        m = ((1 << half) - 1) << half
        period = half << 1
        while period < total:
            m |= m << period
            period <<= 1
        masks.append(m)
    return masks


def models_mask(clauses, n: int) -> int:
    """Bitmask of satisfying assignments of *clauses* over variables 1..n."""
    full = (1 << (1 << n)) - 1
    masks = _var_masks(n)
    sat = full
    for c in clauses:
        cm = 0
        for lit in c:
            m = masks[abs(lit) - 1]
            cm |= m if lit > 0 else full ^ m
        sat &= cm
        if not sat:
            break
    return sat


def brute_force_sat(clauses, n: int) -> bool:
    return models_mask(clauses, n) != 0


def projected_models(clauses, n_total: int, n_keep: int) -> int:
    """Models over 1..n_total projected onto variables 1..n_keep."""
    sat = models_mask(clauses, n_total)
    width = 1 << n_keep
    chunk = (1 << width) - 1
    proj = 0
    while sat:
        proj |= sat & chunk
        sat >>= width
    return proj


def vig_weights(clauses) -> dict[tuple[int, int], int]:
    """Quadratic scan: for every variable pair, count clauses holding both."""
    vs = sorted({abs(l) for c in clauses for l in c})
    out = {}
    for u, v in combinations(vs, 2):
        w = sum(1 for c in clauses if u in {abs(l) for l in c} and v in {abs(l) for l in c})
        if w:
            out[(u, v)] = w
    return out


def walk_counts(clauses) -> dict[tuple[int, int], int]:
    """Enumerate every length-3 walk through clause-labelled edges.

    An edge use is (clause index, from var, to var) for each ordered pair of
    distinct variables sharing a clause; walks are sequences of three uses.
    """
    by_start = defaultdict(list)
    for ci, c in enumerate(clauses):
        vs = sorted({abs(l) for l in c})
        for u in vs:
            for v in vs:
                if u != v:
                    by_start[u].append((ci, v))
    counts = defaultdict(int)
    for x in list(by_start):
        for _, u in by_start[x]:
            for _, v in by_start[u]:
                for _, y in by_start[v]:
                    counts[(x, y)] += 1
    return dict(counts)


def random_cnf(rng: random.Random, max_vars: int = 18, max_clauses: int = 60):
    """Random CNF with planted grids so that BVA has something to do.

    Returns (num_vars, clause list).  Clauses may repeat, contain duplicate
    literals or be tautological on purpose.
    """
    n = rng.randint(2, max_vars)

    def lit():
        v = rng.randint(1, n)
        return v if rng.random() < 0.5 else -v

    clauses: list[list[int]] = []
    for _ in range(rng.randint(0, 3)):
        ls = [lit() for _ in range(rng.randint(2, 4))]
        ps = [[lit() for _ in range(rng.randint(0, 2))] for _ in range(rng.randint(2, 5))]
        for l in ls:
            for p in ps:
                clauses.append([l] + p)
    if rng.random() < 0.3:
        group = rng.sample(range(1, n + 1), min(n, rng.randint(2, 6)))
        clauses.extend([-a, -b] for a, b in combinations(group, 2))
    for _ in range(rng.randint(0, 20)):
        clauses.append([lit() for _ in range(rng.randint(1, 3))])
    rng.shuffle(clauses)
    return n, clauses[:max_clauses]
