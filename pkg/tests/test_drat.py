import io
import random
from collections import Counter

import pytest

from bvakit.bva import EngineConfig, run_bva
from bvakit.cnf import Formula
from bvakit.drat import (DratProof, ProofLine, check_proof, emit_replacement, parse_drat,
                         proof_for, replay)
from bvakit.generators import PackingSpec, gen_packing

from oracles import random_cnf


def test_ab_grid_fragment(ab_grid):
    res = run_bva(ab_grid, EngineConfig(max_replacements=1))
    lines = emit_replacement(res.records[0])
    adds = [l for l in lines if not l.delete]
    dels = [l for l in lines if l.delete]
    assert len(adds) == 6 and len(dels) == 8
    x = res.records[0].new_var
    assert all(l.lits[0] == x for l in adds[:4])
    assert all(l.lits[0] == -x for l in adds[4:])
    assert lines.index(dels[0]) == 6


def test_fragment_checks_and_replays(ab_grid):
    res = run_bva(ab_grid, EngineConfig(max_replacements=1))
    proof = proof_for(res.records)
    assert check_proof(ab_grid, proof)
    assert replay(ab_grid, proof) == Counter(res.formula.live_clauses())


def test_empty_proof():
    f = Formula(2, [[1, 2]])
    assert check_proof(f, DratProof())
    assert replay(f, DratProof()) == Counter(f.live_clauses())


def test_deletion_before_addition_rejected(ab_grid):
    res = run_bva(ab_grid, EngineConfig(max_replacements=1))
    lines = emit_replacement(res.records[0])
    reordered = DratProof([l for l in lines if l.delete] + [l for l in lines if not l.delete])
    verdict = check_proof(ab_grid, reordered)
    assert not verdict
    # the x-lines stay vacuously RAT; the first -x line has nothing to resolve into
    assert verdict.failed_line == 12
    assert reordered.lines[12].lits[0] < 0


def test_unjustified_addition_rejected():
    f = Formula(2, [[1, 2]])
    verdict = check_proof(f, DratProof([ProofLine((-1,))]))
    assert not verdict and verdict.failed_line == 0


def test_absent_deletion_rejected():
    f = Formula(2, [[1, 2]])
    verdict = check_proof(f, DratProof([ProofLine((1, -2), delete=True)]))
    assert not verdict
    with pytest.raises(ValueError):
        replay(f, DratProof([ProofLine((1, -2), delete=True)]))


def test_at_lines_accepted():
    f = Formula(3, [[1, 2], [-2, 3]])
    assert check_proof(f, DratProof([ProofLine((1, 3))]))


def test_text_roundtrip(ab_grid):
    res = run_bva(ab_grid, EngineConfig(max_replacements=1))
    proof = proof_for(res.records)
    buf = io.StringIO()
    proof.write(buf)
    assert buf.getvalue() == proof.text()
    assert parse_drat(proof.text()).lines == proof.lines
    assert proof.text().splitlines()[-1].startswith("d ")


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_drat("1 2\n")


def test_packing_proof():
    f, _ = gen_packing(PackingSpec(3, 6))
    res = run_bva(f, EngineConfig(tiebreak="3hop"))
    assert res.records
    proof = proof_for(res.records)
    assert check_proof(f, proof)
    assert replay(f, proof) == Counter(res.formula.live_clauses())


def test_random_corpus_proofs():
    rng = random.Random(13)
    for _ in range(200):
        n, clauses = random_cnf(rng)
        f = Formula(n, clauses)
        res = run_bva(f, EngineConfig(tiebreak=rng.choice(["sorted", "random", "3hop"]),
                                      seed=rng.randint(0, 99)))
        proof = proof_for(res.records)
        assert check_proof(f, proof)
        assert replay(f, proof) == Counter(res.formula.live_clauses())
