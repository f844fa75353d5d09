import io
import random

import numpy as np
import pytest

from bvakit.cnf import Formula
from bvakit.vig import (HeuristicOverflowError, Vig, VigConsistencyError, build_vig,
                        export_heatmap, heatmap_rows, three_hop, vig_apply_delta)

from oracles import random_cnf, vig_weights, walk_counts


def test_path_graph():
    # a - b - c as binary clauses (1 2), (2 3)
    g = build_vig(Formula(3, [[1, 2], [2, 3]]))
    h = three_hop(g, 1)
    assert h[2] == 2
    assert h[3] == 0
    assert h[1] == 0


def test_triangle():
    g = build_vig(Formula(3, [[1, 2, 3]]))
    assert g.weight(1, 2) == g.weight(2, 3) == g.weight(1, 3) == 1
    h = three_hop(g, 1)
    assert h[2] == 3 and h[3] == 3
    assert h[1] == 2


def test_isolated_variable():
    g = build_vig(Formula(4, [[1, 2]]))
    assert not three_hop(g, 4).any()


def test_out_of_range():
    g = build_vig(Formula(2, [[1, 2]]))
    with pytest.raises(IndexError):
        three_hop(g, 3)
    with pytest.raises(IndexError):
        three_hop(g, 0)


def test_weights_count_shared_clauses():
    g = build_vig(Formula(3, [[1, 2], [-1, 2, 3], [1, -2]]))
    assert g.weight(1, 2) == 3
    assert g.weight(2, 3) == 1
    assert g.weight(2, 1) == 3


def test_unit_clauses_add_no_edges():
    g = build_vig(Formula(2, [[1], [-2]]))
    assert g.edges() == {}


def test_weights_match_quadratic_scan():
    rng = random.Random(3)
    for _ in range(100):
        n, clauses = random_cnf(rng, max_vars=12, max_clauses=30)
        f = Formula(n, clauses)
        assert build_vig(f).edges() == vig_weights(f.live_clauses())


def test_three_hop_matches_walk_enumeration():
    rng = random.Random(11)
    for _ in range(60):
        n, clauses = random_cnf(rng, max_vars=10, max_clauses=25)
        f = Formula(n, clauses)
        g = build_vig(f)
        walks = walk_counts(f.live_clauses())
        for x in range(1, n + 1):
            row = g.three_hop(x)
            for y in range(1, n + 1):
                assert row[y] == walks.get((x, y), 0)


def test_symmetry():
    rng = random.Random(5)
    n, clauses = random_cnf(rng, max_vars=14)
    g = build_vig(Formula(n, clauses))
    rows = np.array([g.three_hop(x) for x in range(1, g.n + 1)])[:, 1:]
    assert (rows == rows.T).all()


def test_delta_equals_rebuild():
    rng = random.Random(9)
    for _ in range(100):
        n, clauses = random_cnf(rng, max_vars=12)
        f = Formula(n, clauses)
        g = build_vig(f)
        live = list(f.live_ids())
        removed = rng.sample(live, rng.randint(0, len(live)))
        removed_clauses = [f.clauses[i] for i in removed]
        for i in removed:
            f.delete_clause(i)
        added = []
        for _ in range(rng.randint(0, 5)):
            c = [rng.choice([-1, 1]) * rng.randint(1, n + 2) for _ in range(rng.randint(1, 4))]
            added.append(f.clauses[f.add_clause(c)])
        vig_apply_delta(g, added, removed_clauses)
        assert g == build_vig(f)
        if f.num_vars:
            x = rng.randint(1, g.n)
            assert (g.three_hop(x)[: f.num_vars + 1]
                    == build_vig(f).three_hop(x)[: f.num_vars + 1]).all()


def test_cached_matrix_invalidated_on_mutation():
    g = build_vig(Formula(3, [[1, 2]]))
    assert g.three_hop(1)[2] == 1
    g.add_clause((2, 3))
    assert g.three_hop(1)[2] == 2
    g.remove_clause((1, 2))
    assert not g.three_hop(1).any()


def test_inconsistent_removal_raises():
    g = build_vig(Formula(3, [[1, 2]]))
    with pytest.raises(VigConsistencyError):
        g.remove_clause((2, 3))
    with pytest.raises(VigConsistencyError):
        Vig(2).remove_clause((1, 2))


def test_overflow_detected():
    g = Vig(2)
    g.adj[1][2] = g.adj[2][1] = 2**22
    with pytest.raises(HeuristicOverflowError):
        g.three_hop(1)


def test_heatmap_csv():
    g = build_vig(Formula(3, [[1, 2], [2, 3]]))
    assert heatmap_rows(g, 1) == [(2, 2)]
    buf = io.StringIO()
    export_heatmap(g, 2, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "var,h"
    assert lines[1:] == ["1,2", "3,2"]
