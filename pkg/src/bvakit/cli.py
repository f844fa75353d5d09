"""Command-line entry point: ``bvakit <command> ...``.

Engine imports happen inside the command handlers so that ``pipeline``
with the baseline variant never loads the preprocessor.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from contextlib import contextmanager

from .cnf import DimacsError, formula_stats, parse_dimacs, write_dimacs

log = logging.getLogger("bvakit")


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _read_input(path: str):
    if path == "-":
        return parse_dimacs(sys.stdin.buffer)
    with open(path, "rb") as fh:
        return parse_dimacs(fh)


def cmd_preprocess(args) -> int:
    from .bva import EngineConfig, run_bva
    from .drat import proof_for

    t0 = time.monotonic()
    f = _read_input(args.input)
    before = formula_stats(f)
    budget = None
    if args.timeout is not None:
        budget = args.timeout - (time.monotonic() - t0)
    cfg_kw = dict(tiebreak=args.tiebreak, seed=args.seed, condition=args.condition,
                  max_replacements=args.max_replacements, freeze_vig=args.freeze_vig)
    if budget is not None and budget <= 0:
        result, partial = None, True
    else:
        result = run_bva(f, EngineConfig(time_budget=budget, **cfg_kw))
        partial = result.partial
    if partial:
        out_f, records = f, []
    else:
        out_f, records = result.formula, result.records
    with _open_out(args.output) as fh:
        write_dimacs(out_f, fh)
    if args.proof:
        with open(args.proof, "w") as fh:
            proof_for(records).write(fh)
    after = formula_stats(out_f)
    print(f"c stats vars_before={before[0]} clauses_before={before[1]} "
          f"vars_after={after[0]} clauses_after={after[1]} "
          f"replacements={len(records)} elapsed={time.monotonic() - t0:.6f} "
          f"partial={int(partial)}", file=sys.stderr)
    return 0


def cmd_scramble(args) -> int:
    from .scramble import ScrambleConfig, scramble

    f = _read_input(args.input)
    cfg = ScrambleConfig(seed=args.seed, permute_vars=args.permute_vars,
                         permute_clauses=args.permute_clauses,
                         shuffle_within_clause=args.shuffle_literals,
                         flip_prob=args.flip_prob)
    out, rec = scramble(f, cfg)
    with _open_out(args.output) as fh:
        write_dimacs(out, fh, comments=rec.comments(cfg) if args.record else ())
    return 0


def cmd_gen(args) -> int:
    from .generators import (PackingSpec, PigeonholeSpec, gen_packing, gen_php,
                             legend_comments)

    comments: list[str] = []
    if args.family == "packing":
        f, legend = gen_packing(PackingSpec(args.r, args.k, args.center_color))
        comments = [f"packing coloring r={args.r} k={args.k}"] + legend_comments(legend)
        if args.legend:
            with open(args.legend, "w") as fh:
                fh.write("var,tile_x,tile_y,color\n")
                for e in legend:
                    fh.write(f"{e.var},{e.tile[0]},{e.tile[1]},{e.color}\n")
    else:
        f = gen_php(PigeonholeSpec(args.pigeons, args.holes))
        comments = [f"pigeonhole pigeons={args.pigeons} holes={args.holes}"]
    with _open_out(args.output) as fh:
        write_dimacs(f, fh, comments=comments)
    return 0


def cmd_stats(args) -> int:
    nv, nc = formula_stats(_read_input(args.input))
    print(f"vars={nv} clauses={nc}")
    return 0


def cmd_heatmap(args) -> int:
    from .vig import build_vig, export_heatmap

    g = build_vig(_read_input(args.input))
    if not 1 <= args.var <= g.n:
        raise ValueError(f"variable {args.var} outside 1..{g.n}")
    with _open_out(args.output) as fh:
        export_heatmap(g, args.var, fh)
    return 0


def cmd_pipeline(args) -> int:
    from .harness import PipelineConfig, run_pipeline, write_csv, write_summary

    kw = dict(variant=args.variant, preprocess_budget_secs=args.preprocess_budget,
              total_budget_secs=args.total_budget, repeats=args.repeats,
              seed=args.seed, jobs=args.jobs, workdir=args.workdir)
    if args.solver:
        kw["solver"] = args.solver
    results = run_pipeline(PipelineConfig(**kw), args.instances)
    with _open_out(args.csv) as fh:
        write_csv(results, fh)
    if args.summary:
        with open(args.summary, "w") as fh:
            write_summary(results, fh)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bvakit", description="Bounded variable addition toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("preprocess", help="run BVA / SBVA on a DIMACS file")
    pp.add_argument("input")
    pp.add_argument("-o", "--output")
    pp.add_argument("--tiebreak", choices=["sorted", "random", "3hop"], default="3hop")
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--max-replacements", type=int)
    pp.add_argument("--timeout", type=float, help="seconds, parsing included")
    pp.add_argument("--proof", help="write a DRAT proof here")
    pp.add_argument("--condition", default="strict_clause_decrease",
                    choices=["strict_clause_decrease", "vars_plus_clauses"])
    pp.add_argument("--freeze-vig", action="store_true",
                    help="compute the 3-hop heuristic on the input formula only")
    pp.set_defaults(func=cmd_preprocess)

    ps = sub.add_parser("scramble", help="seeded renaming / reordering / polarity flips")
    ps.add_argument("input")
    ps.add_argument("-o", "--output")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--permute-vars", action="store_true")
    ps.add_argument("--permute-clauses", action="store_true")
    ps.add_argument("--shuffle-literals", action="store_true")
    ps.add_argument("--flip-prob", type=float, default=0.0)
    ps.add_argument("--record", action="store_true",
                    help="write the variable mapping as comment lines")
    ps.set_defaults(func=cmd_scramble)

    pg = sub.add_parser("gen", help="generate benchmark formulas")
    gsub = pg.add_subparsers(dest="family", required=True)
    gp = gsub.add_parser("packing")
    gp.add_argument("--r", type=int, required=True)
    gp.add_argument("--k", type=int, required=True)
    gp.add_argument("--center-color", type=int)
    gp.add_argument("--legend", help="sidecar CSV for the variable legend")
    gp.add_argument("-o", "--output")
    gh = gsub.add_parser("php")
    gh.add_argument("--pigeons", type=int, required=True)
    gh.add_argument("--holes", type=int, required=True)
    gh.add_argument("-o", "--output")
    pg.set_defaults(func=cmd_gen)

    pst = sub.add_parser("stats", help="print variable and clause counts")
    pst.add_argument("input")
    pst.set_defaults(func=cmd_stats)

    phm = sub.add_parser("heatmap", help="3-hop heuristic row as CSV")
    phm.add_argument("input")
    phm.add_argument("--var", type=int, required=True)
    phm.add_argument("-o", "--output")
    phm.set_defaults(func=cmd_heatmap)

    ppl = sub.add_parser("pipeline", help="scramble -> preprocess -> solve benchmark")
    ppl.add_argument("instances", nargs="+")
    ppl.add_argument("--variant", default="bva-rand-3hop",
                     choices=["baseline", "bva-orig", "bva-rand-orig", "bva-rand-3hop"])
    ppl.add_argument("--solver", help="command template, {cnf} is replaced by the path "
                                      "(default: $BVAKIT_SOLVER or 'cadical {cnf}')")
    ppl.add_argument("--preprocess-budget", type=float, default=200.0)
    ppl.add_argument("--total-budget", type=float, default=5000.0)
    ppl.add_argument("--repeats", type=int, default=3)
    ppl.add_argument("--seed", type=int, default=0)
    ppl.add_argument("--jobs", type=int, default=1)
    ppl.add_argument("--workdir")
    ppl.add_argument("--csv", help="per-repeat CSV (default stdout)")
    ppl.add_argument("--summary", help="per-instance summary CSV")
    ppl.set_defaults(func=cmd_pipeline)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DimacsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
