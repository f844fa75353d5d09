"""Simulated-competition pipeline: scramble -> preprocess -> external solve.

The preprocessor runs as a ``python -m bvakit preprocess`` subprocess so a
crash or out-of-memory kill shows up as abnormal termination and triggers
the fallback to the unprocessed formula.  This module deliberately avoids
importing the BVA engine: the baseline variant never loads it.
"""

from __future__ import annotations

import csv
import logging
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import IO

from .cnf import DimacsError, Formula, read_dimacs, write_dimacs
from .scramble import ScrambleConfig, scramble

log = logging.getLogger(__name__)

SOLVER_ENV = "BVAKIT_SOLVER"
EXIT_SAT, EXIT_UNSAT = 10, 20


class Variant(str, Enum):
    BASELINE = "baseline"
    BVA_ORIG = "bva-orig"
    BVA_RAND_ORIG = "bva-rand-orig"
    BVA_RAND_3HOP = "bva-rand-3hop"

    @property
    def pre_scramble(self) -> bool:
        return self in (Variant.BVA_RAND_ORIG, Variant.BVA_RAND_3HOP)

    @property
    def tiebreak(self) -> str | None:
        return {Variant.BASELINE: None,
                Variant.BVA_ORIG: "sorted",
                Variant.BVA_RAND_ORIG: "sorted",
                Variant.BVA_RAND_3HOP: "3hop"}[self]


class SolverNotFound(FileNotFoundError):
    pass


def compression_factor(before: tuple[int, int], after: tuple[int, int]) -> float:
    """Ratio of clause counts before/after preprocessing; pairs are (vars, clauses)."""
    if after[1] == 0:
        raise ZeroDivisionError("formula after preprocessing has no clauses")
    return before[1] / after[1]


def par2(solved: bool, total_s: float, limit_s: float) -> float:
    return total_s if solved and total_s <= limit_s else 2.0 * limit_s


@dataclass
class PipelineConfig:
    variant: Variant = Variant.BVA_RAND_3HOP
    solver: str = field(default_factory=lambda: os.environ.get(SOLVER_ENV, "cadical {cnf}"))
    preprocess_budget_secs: float = 200.0
    total_budget_secs: float = 5000.0
    repeats: int = 3
    seed: int = 0
    scramble_cfg: ScrambleConfig = field(default_factory=ScrambleConfig)
    preprocess_args: tuple[str, ...] = ()
    workdir: str | None = None
    jobs: int = 1

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if self.preprocess_budget_secs <= 0 or self.total_budget_secs <= 0:
            raise ValueError("budgets must be positive")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")

    def seeds(self, repeat: int) -> tuple[int, int]:
        """(pre-preprocessing, post-preprocessing) scramble seeds for a repeat."""
        base = self.seed + 2 * repeat
        return base, base + 1


CSV_COLUMNS = ["instance", "variant", "repeat", "vars_before", "clauses_before",
               "vars_after", "clauses_after", "replacements", "preprocess_s",
               "solve_s", "status", "par2"]


@dataclass
class RepeatResult:
    instance: str
    variant: str
    repeat: int
    vars_before: int = 0
    clauses_before: int = 0
    vars_after: int = 0
    clauses_after: int = 0
    replacements: int = 0
    preprocess_s: float = 0.0
    solve_s: float = 0.0
    status: str = "ERROR"
    par2: float = 0.0
    fallback: bool = False

    @property
    def solved(self) -> bool:
        return self.status in ("SAT", "UNSAT")

    def row(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in CSV_COLUMNS}


@dataclass
class RunResult:
    instance: str
    variant: str
    repeats: list[RepeatResult] = field(default_factory=list)
    error: str | None = None

    @property
    def par2(self) -> float:
        return sum(r.par2 for r in self.repeats) / len(self.repeats)

    @property
    def solved(self) -> bool:
        return any(r.solved for r in self.repeats)

    @property
    def compression(self) -> float:
        factors = [compression_factor((r.vars_before, r.clauses_before),
                                      (r.vars_after, r.clauses_after))
                   for r in self.repeats if r.clauses_after]
        return sum(factors) / len(factors) if factors else float("nan")


def solver_argv(template: str, cnf_path: str) -> list[str]:
    argv = shlex.split(template)
    if any("{cnf}" in a for a in argv):
        return [a.replace("{cnf}", cnf_path) for a in argv]
    return argv + [cnf_path]


def parse_stats_line(text: str) -> dict[str, str]:
    for line in text.splitlines():
        if line.startswith("c stats "):
            return dict(tok.split("=", 1) for tok in line[8:].split() if "=" in tok)
    return {}


def _timed_run(argv: list[str], timeout: float) -> tuple[subprocess.CompletedProcess | None, float]:
    t0 = time.perf_counter()
    try:
        proc = subprocess.run(argv, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                              timeout=timeout, text=True)
    except subprocess.TimeoutExpired:
        return None, time.perf_counter() - t0
    return proc, time.perf_counter() - t0


def _write(f: Formula, path: Path) -> None:
    with open(path, "w") as fh:
        write_dimacs(f, fh)


class Pipeline:
    def __init__(self, cfg: PipelineConfig):
        self.cfg = cfg
        exe = solver_argv(cfg.solver, "x")[0]
        if shutil.which(exe) is None:
            raise SolverNotFound(f"solver executable {exe!r} not found")

    def preprocess(self, src: Path, dst: Path, tiebreak: str, seed: int):
        """Run the preprocessor subprocess.  Returns (ok, seconds, stats)."""
        argv = [sys.executable, "-m", "bvakit", "preprocess", str(src), "-o", str(dst),
                "--tiebreak", tiebreak, "--seed", str(seed),
                "--timeout", str(self.cfg.preprocess_budget_secs),
                *self.cfg.preprocess_args]
        proc, elapsed = _timed_run(argv, self.cfg.preprocess_budget_secs)
        if proc is None:
            log.info("preprocessing %s timed out after %.2fs", src, elapsed)
            return False, elapsed, {}
        if proc.returncode != 0:
            log.warning("preprocessor exited with %d on %s: %s",
                        proc.returncode, src, proc.stderr.strip()[-500:])
            return False, elapsed, {}
        stats = parse_stats_line(proc.stderr)
        if stats.get("partial") == "1":
            return False, elapsed, stats
        return True, elapsed, stats

    def solve(self, path: Path, remaining: float) -> tuple[str, float]:
        if remaining <= 0:
            return "TIMEOUT", 0.0
        proc, elapsed = _timed_run(solver_argv(self.cfg.solver, str(path)), remaining)
        if proc is None:
            return "TIMEOUT", elapsed
        if proc.returncode == EXIT_SAT:
            return "SAT", elapsed
        if proc.returncode == EXIT_UNSAT:
            return "UNSAT", elapsed
        return "UNKNOWN", elapsed

    def run_repeat(self, name: str, original: Formula, repeat: int, work: Path) -> RepeatResult:
        cfg = self.cfg
        variant = cfg.variant
        pre_seed, post_seed = cfg.seeds(repeat)
        res = RepeatResult(name, variant.value, repeat,
                           original.num_vars, original.num_clauses)
        f = original
        if variant.pre_scramble:
            f, _ = scramble(f, _with_seed(cfg.scramble_cfg, pre_seed))
        if variant.tiebreak is not None:
            src, dst = work / f"r{repeat}_in.cnf", work / f"r{repeat}_bva.cnf"
            _write(f, src)
            ok, res.preprocess_s, stats = self.preprocess(src, dst, variant.tiebreak, pre_seed)
            if ok:
                f = read_dimacs(dst)
                res.replacements = int(stats.get("replacements", 0))
            else:
                res.fallback = True
        res.vars_after, res.clauses_after = f.num_vars, f.num_clauses
        f, _ = scramble(f, _with_seed(cfg.scramble_cfg, post_seed))
        solve_path = work / f"r{repeat}_solve.cnf"
        _write(f, solve_path)
        remaining = cfg.total_budget_secs - res.preprocess_s
        res.status, res.solve_s = self.solve(solve_path, remaining)
        total = res.preprocess_s + res.solve_s
        if res.solved and total > cfg.total_budget_secs:
            res.status = "TIMEOUT"
        res.par2 = par2(res.solved, total, cfg.total_budget_secs)
        return res

    def run_instance(self, path: str) -> RunResult:
        name = Path(path).name
        result = RunResult(name, self.cfg.variant.value)
        try:
            original = read_dimacs(path)
        except (OSError, DimacsError, UnicodeDecodeError) as exc:
            log.error("cannot read %s: %s", path, exc)
            result.error = str(exc)
            result.repeats.append(RepeatResult(name, self.cfg.variant.value, 0,
                                               par2=2.0 * self.cfg.total_budget_secs))
            return result
        with tempfile.TemporaryDirectory(dir=self.cfg.workdir, prefix="bvakit-") as tmp:
            for rep in range(self.cfg.repeats):
                result.repeats.append(self.run_repeat(name, original, rep, Path(tmp)))
        return result

    def run(self, instances: list[str]) -> list[RunResult]:
        if self.cfg.jobs <= 1:
            return [self.run_instance(p) for p in instances]
        with ThreadPoolExecutor(max_workers=self.cfg.jobs) as pool:
            return list(pool.map(self.run_instance, instances))


def _with_seed(cfg: ScrambleConfig, seed: int) -> ScrambleConfig:
    kw = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    kw["seed"] = seed
    return ScrambleConfig(**kw)


def run_pipeline(cfg: PipelineConfig, instances: list[str]) -> list[RunResult]:
    return Pipeline(cfg).run(instances)


def write_csv(results: list[RunResult], out: IO[str]) -> None:
    w = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in results:
        for rep in r.repeats:
            w.writerow(rep.row())


SUMMARY_COLUMNS = ["instance", "variant", "par2_mean", "solved", "compression"]


def write_summary(results: list[RunResult], out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for r in results:
        w.writerow([r.instance, r.variant, f"{r.par2:.6f}", int(r.solved),
                    f"{r.compression:.6f}"])


def read_csv(fh: IO[str]) -> list[dict]:
    """Parse a pipeline CSV back into typed rows."""
    ints = {"repeat", "vars_before", "clauses_before", "vars_after",
            "clauses_after", "replacements"}
    floats = {"preprocess_s", "solve_s", "par2"}
    rows = []
    for row in csv.DictReader(fh):
        rows.append({k: int(v) if k in ints else float(v) if k in floats else v
                     for k, v in row.items()})
    return rows
