"""DRAT proof emission for replacements and a small RAT/AT checker.

A replacement introducing x over grid (L, P) is logged as:

1. ``x C`` for each C in P -- RAT on x, vacuously, since x is fresh;
2. ``-x l`` for each l in L -- RAT on -x, every resolvent ``l C`` is a grid
   clause that is still present;
3. ``d l C`` for each grid clause.

The checker only covers that fragment: AT via unit propagation, RAT on
the first literal of the line.  It is a test oracle, not a full verifier.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import IO

from .bva import ReplacementRecord
from .cnf import Clause, Formula, normalize_clause


@dataclass(frozen=True)
class ProofLine:
    lits: tuple[int, ...]
    delete: bool = False

    def __str__(self) -> str:
        body = " ".join(map(str, self.lits + (0,)))
        return f"d {body}" if self.delete else body


@dataclass
class DratProof:
    lines: list[ProofLine] = field(default_factory=list)

    def add(self, lits: Iterable[int]) -> None:
        self.lines.append(ProofLine(tuple(lits)))

    def delete(self, lits: Iterable[int]) -> None:
        self.lines.append(ProofLine(tuple(lits), delete=True))

    def extend(self, lines: Iterable[ProofLine]) -> None:
        self.lines.extend(lines)

    def write(self, out: IO[str]) -> None:
        for line in self.lines:
            out.write(f"{line}\n")

    def text(self) -> str:
        return "".join(f"{line}\n" for line in self.lines)

    def __len__(self) -> int:
        return len(self.lines)


def parse_drat(text: str) -> DratProof:
    proof = DratProof()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        delete = toks[0] == "d"
        if delete:
            toks = toks[1:]
        lits = [int(t) for t in toks]
        if not lits or lits[-1] != 0 or 0 in lits[:-1]:
            raise ValueError(f"line {lineno}: malformed proof line {raw!r}")
        proof.lines.append(ProofLine(tuple(lits[:-1]), delete))
    return proof


def _pivot_first(clause: Clause, pivot: int) -> tuple[int, ...]:
    return (pivot,) + tuple(x for x in clause if x != pivot)


def emit_replacement(rec: ReplacementRecord) -> list[ProofLine]:
    x = rec.new_var
    lines = []
    for c in rec.added:
        if x in c:
            lines.append(ProofLine(_pivot_first(c, x)))
    for c in rec.added:
        if -x in c:
            lines.append(ProofLine(_pivot_first(c, -x)))
    lines.extend(ProofLine(c, delete=True) for c in rec.deleted)
    return lines


def proof_for(records: Iterable[ReplacementRecord]) -> DratProof:
    proof = DratProof()
    for rec in records:
        proof.extend(emit_replacement(rec))
    return proof


class _ClauseDb:
    """Clause multiset with a literal occurrence map for propagation."""

    def __init__(self, clauses: Iterable[Clause]):
        self.count: Counter[Clause] = Counter()
        self.occ: dict[int, set[Clause]] = {}
        self.units: set[Clause] = set()
        for c in clauses:
            self.add(c)

    def add(self, c: Clause) -> None:
        self.count[c] += 1
        if self.count[c] == 1:
            for lit in c:
                self.occ.setdefault(lit, set()).add(c)
            if len(c) <= 1:
                self.units.add(c)

    def remove(self, c: Clause) -> bool:
        if self.count[c] <= 0:
            return False
        self.count[c] -= 1
        if self.count[c] == 0:
            del self.count[c]
            for lit in c:
                self.occ[lit].discard(c)
            self.units.discard(c)
        return True

    def propagates_conflict(self, assumptions: Iterable[int]) -> bool:
        """True when unit propagation from *assumptions* reaches a conflict."""
        true: set[int] = set()
        todo: list[int] = []

        def assign(lit: int) -> bool:
            if -lit in true:
                return False
            if lit not in true:
                true.add(lit)
                todo.append(lit)
            return True

        for lit in assumptions:
            if not assign(lit):
                return True
        for u in self.units:
            if not u or not assign(u[0]):
                return True
        while todo:
            lit = todo.pop()
            for c in self.occ.get(-lit, ()):
                unassigned = None
                satisfied = False
                n_open = 0
                for x in c:
                    if x in true:
                        satisfied = True
                        break
                    if -x not in true:
                        n_open += 1
                        unassigned = x
                        if n_open > 1:
                            break
                if satisfied or n_open > 1:
                    continue
                if n_open == 0:
                    return True
                if not assign(unassigned):
                    return True
        return False

    def is_at(self, clause: Clause) -> bool:
        return self.propagates_conflict(-x for x in clause)

    def is_rat(self, clause: tuple[int, ...], pivot: int) -> bool:
        rest = set(clause)
        for d in list(self.occ.get(-pivot, ())):
            resolvent = rest | {x for x in d if x != -pivot}
            if any(-x in resolvent for x in resolvent):
                continue
            if not self.is_at(tuple(resolvent)):
                return False
        return True


@dataclass(frozen=True)
class ProofVerdict:
    ok: bool
    failed_line: int | None = None  # 0-based index into proof.lines
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_proof(f: Formula, proof: DratProof) -> ProofVerdict:
    db = _ClauseDb(f.live_clauses())
    for i, line in enumerate(proof.lines):
        clause = normalize_clause(line.lits)
        if line.delete:
            if not db.remove(clause):
                return ProofVerdict(False, i, f"deleted clause {line.lits} not present")
            continue
        if not (db.is_at(clause) or (line.lits and db.is_rat(clause, line.lits[0]))):
            return ProofVerdict(False, i, f"clause {line.lits} is neither AT nor RAT")
        db.add(clause)
    return ProofVerdict(True)


def replay(f: Formula, proof: DratProof) -> Counter[Clause]:
    """Clause multiset after applying every addition and deletion."""
    ms = Counter(f.live_clauses())
    for line in proof.lines:
        c = normalize_clause(line.lits)
        if line.delete:
            if ms[c] <= 0:
                raise ValueError(f"deleting absent clause {line.lits}")
            ms[c] -= 1
            if ms[c] == 0:
                del ms[c]
        else:
            ms[c] += 1
    return ms
