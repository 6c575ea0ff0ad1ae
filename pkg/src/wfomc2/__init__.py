"""Exact weighted first-order model counting for two-variable sentences.

Supports a built-in linear order together with successor relations
``pred1``..``predk`` or a cyclic successor ``cirpred``, plus cardinality
constraints, evidence and constants.  ``solve`` is the main entry point;
``oracle_wfomc_full`` is an independent brute-force reference.
"""
from .dp import (
    InternalError, SolveResult, prepare, solve, wfomc_cyclic, wfomc_general, wfomc_linear,
    wfomc_plain, wfomc_pred1,
)
from .kernel import active_backend, available_backends, set_backend, use_backend
from .oracle import OracleLimitError, oracle_wfomc_fixed_order, oracle_wfomc_full
from .parser import parse_formula, parse_sentence, print_sentence
from .syntax import ParseError, SentenceSpec, SpecError, WFOMCError

__version__ = "0.1.0"


def count(text: str, n=None, ring=None, fixed_order=None):
    """Parse ``text`` and return its weighted model count."""
    return solve(parse_sentence(text), n=n, ring=ring, fixed_order=fixed_order).value


__all__ = [
    "InternalError", "OracleLimitError", "ParseError", "SentenceSpec", "SolveResult",
    "SpecError", "WFOMCError", "active_backend", "available_backends", "count",
    "oracle_wfomc_fixed_order", "oracle_wfomc_full", "parse_formula", "parse_sentence",
    "prepare", "print_sentence", "set_backend", "solve", "use_backend", "wfomc_cyclic",
    "wfomc_general", "wfomc_linear", "wfomc_plain", "wfomc_pred1",
]
