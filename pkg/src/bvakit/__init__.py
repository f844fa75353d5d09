"""Bounded variable addition (BVA) and structured BVA for CNF formulas."""

from .cnf import Formula, formula_stats, parse_dimacs, read_dimacs, write_dimacs

_LAZY = {"BvaResult", "Condition", "EngineConfig", "ReplacementRecord", "TieBreak",
         "run_bva"}

__all__ = sorted(_LAZY | {"Formula", "formula_stats", "parse_dimacs", "read_dimacs",
                          "write_dimacs"})
__version__ = "0.1.0"


def __getattr__(name):
    # keep the engine out of sys.modules until something asks for it
    if name in _LAZY:
        from . import bva
        return getattr(bva, name)
    raise AttributeError(f"module 'bvakit' has no attribute {name!r}")
