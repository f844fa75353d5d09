"""CNF data model, DIMACS I/O and literal occurrence indexing.

Literals are plain signed ints in DIMACS convention (``3`` / ``-3``).
Clauses are tuples of literals sorted by ``(variable, polarity)`` with the
positive literal first, and free of duplicates.  A clause tuple doubles as
its canonical key.
"""

from __future__ import annotations

import io
import logging
from collections.abc import Iterable, Iterator
from typing import IO, Union

log = logging.getLogger(__name__)

Clause = tuple[int, ...]


class DimacsError(ValueError):
    """Malformed DIMACS input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def var(lit: int) -> int:
    return lit if lit > 0 else -lit


def neg(lit: int) -> int:
    return -lit


def lit_key(lit: int) -> tuple[int, int]:
    """Sort key ordering literals by variable, positive before negative."""
    return (lit, 0) if lit > 0 else (-lit, 1)


def normalize_clause(lits: Iterable[int]) -> Clause:
    """Sort and deduplicate *lits*.  Raises ValueError on literal 0."""
    seen = set(lits)
    if 0 in seen:
        raise ValueError("literal 0 is not a valid literal")
    return tuple(sorted(seen, key=lit_key))


def is_tautology(clause: Clause) -> bool:
    # sorted order puts x and -x next to each other
    for a, b in zip(clause, clause[1:]):
        if a == -b:
            return True
    return False


class Formula:
    """Clause database with tombstoned deletion.

    Clause ids are positions in :attr:`clauses` and stay stable for the
    lifetime of the object; deleting a clause only clears its ``live`` slot.
    """

    def __init__(self, num_vars: int = 0, clauses: Iterable[Iterable[int]] = ()):
        self.num_vars = num_vars
        self.clauses: list[Clause] = []
        self.live: list[bool] = []
        self._num_live = 0
        for c in clauses:
            self.add_clause(c)

    def add_clause(self, lits: Iterable[int]) -> int:
        clause = normalize_clause(lits)
        for lit in clause:
            if var(lit) > self.num_vars:
                self.num_vars = var(lit)
        self.clauses.append(clause)
        self.live.append(True)
        self._num_live += 1
        return len(self.clauses) - 1

    def delete_clause(self, cid: int) -> None:
        if not self.live[cid]:
            raise KeyError(f"clause {cid} is already deleted")
        self.live[cid] = False
        self._num_live -= 1

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    @property
    def num_clauses(self) -> int:
        return self._num_live

    def live_ids(self) -> Iterator[int]:
        return (i for i, alive in enumerate(self.live) if alive)

    def live_clauses(self) -> list[Clause]:
        return [c for c, alive in zip(self.clauses, self.live) if alive]

    def key(self, cid: int) -> Clause:
        return self.clauses[cid]

    def copy(self) -> Formula:
        f = Formula(self.num_vars)
        f.clauses = list(self.clauses)
        f.live = list(self.live)
        f._num_live = self._num_live
        return f

    def compacted(self) -> Formula:
        return Formula(self.num_vars, self.live_clauses())

    def __len__(self) -> int:
        return self._num_live

    def __repr__(self) -> str:
        return f"Formula(num_vars={self.num_vars}, num_clauses={self.num_clauses})"


def _read_text(source: Union[str, bytes, IO]) -> str:
    if isinstance(source, bytes):
        return source.decode("ascii")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("ascii") if isinstance(data, bytes) else data


def parse_dimacs(source: Union[str, bytes, IO]) -> Formula:
    """Parse DIMACS CNF text (str, bytes or an open file)."""
    text = _read_text(source)
    header: tuple[int, int] | None = None
    formula: Formula | None = None
    current: list[int] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        last_line = lineno
        if line[0] == "p":
            if header is not None:
                raise DimacsError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                nv, nc = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if nv < 0 or nc < 0:
                raise DimacsError(f"negative count in header {line!r}", lineno)
            header = (nv, nc)
            formula = Formula(nv)
            continue
        if formula is None:
            raise DimacsError("clause data before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"non-integer token {tok!r}", lineno) from None
            if lit == 0:
                formula.add_clause(current)
                current = []
            else:
                current.append(lit)
    if formula is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("unterminated final clause", last_line)
    assert header is not None
    if formula.num_vars > header[0]:
        log.warning("header declares %d variables but literals reach %d",
                    header[0], formula.num_vars)
    if formula.num_clauses != header[1]:
        log.warning("header declares %d clauses, parsed %d",
                    header[1], formula.num_clauses)
    return formula


def read_dimacs(path) -> Formula:
    with open(path, "rb") as fh:
        return parse_dimacs(fh)


def write_dimacs(f: Formula, out: IO[str] | None = None,
                 comments: Iterable[str] = ()) -> str | None:
    """Write the live clauses of *f*.  Returns the text when *out* is None."""
    buf = io.StringIO() if out is None else out
    for c in comments:
        buf.write(f"c {c}\n" if c else "c\n")
    buf.write(f"p cnf {f.num_vars} {f.num_clauses}\n")
    for clause in f.live_clauses():
        buf.write(" ".join(map(str, clause)))
        buf.write(" 0\n" if clause else "0\n")
    if out is None:
        return buf.getvalue()
    return None


class OccurrenceIndex:
    """Literal -> ids of live clauses containing it.

    Id collections are dicts used as insertion-ordered sets so iteration
    order follows clause creation order and stays deterministic.
    """

    def __init__(self):
        self._occ: dict[int, dict[int, None]] = {}

    def add(self, cid: int, clause: Clause) -> None:
        for lit in clause:
            self._occ.setdefault(lit, {})[cid] = None

    def remove(self, cid: int, clause: Clause) -> None:
        for lit in clause:
            del self._occ[lit][cid]

    def ids(self, lit: int) -> dict[int, None]:
        return self._occ.get(lit, {})

    def count(self, lit: int) -> int:
        return len(self._occ.get(lit, ()))

    def literals(self) -> list[int]:
        return [lit for lit, ids in self._occ.items() if ids]

    def as_dict(self) -> dict[int, set[int]]:
        return {lit: set(ids) for lit, ids in self._occ.items() if ids}


def build_occurrence_index(f: Formula) -> OccurrenceIndex:
    idx = OccurrenceIndex()
    for cid in f.live_ids():
        idx.add(cid, f.clauses[cid])
    return idx


def formula_stats(f: Formula) -> tuple[int, int]:
    return f.num_vars, f.num_clauses
