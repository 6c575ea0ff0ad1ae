"""Named ways of computing the same count, used by ``compare`` and ``bench``.

``native`` is the main engine.  ``plain``, ``linear``, ``pred1``, ``cyclic``
and ``general-k`` call the matching engine entry point directly and refuse
specs with a different axiom.  ``reference`` runs the dense recurrences,
``legacy-encoding`` replaces native predecessors by ordinary predicates and
``oracle`` enumerates ground worlds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import dp, dp_reference
from .legacy import legacy_encoding
from .oracle import MAX_ATOMS, oracle_wfomc_fixed_order, oracle_wfomc_full
from .syntax import SentenceSpec, SpecError

ALIASES = {"legacy": "legacy-encoding", "general": "general-k", "engine": "native"}
VARIANTS = ("native", "plain", "linear", "pred1", "cyclic", "general-k", "reference",
            "legacy-encoding", "oracle")


@dataclass
class VariantResult:
    value: object
    peak_keys: Optional[int]


def canonical(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in VARIANTS:
        raise SpecError(f"unknown variant {name!r}; choose from {', '.join(VARIANTS)}")
    return name


def _axiom_kind(spec: SentenceSpec) -> str:
    ax = spec.axiom
    if ax is None:
        return "plain"
    if ax.cyclic:
        return "cyclic"
    if not ax.preds:
        return "linear"
    return "pred1" if ax.preds == (1,) else "general-k"


_DIRECT = {
    "linear": (dp.wfomc_linear, {"linear"}),
    "pred1": (dp.wfomc_pred1, {"pred1"}),
    "cyclic": (dp.wfomc_cyclic, {"cyclic"}),
    "general-k": (dp.wfomc_general, {"linear", "pred1", "general-k"}),
}

_REFERENCE = {
    "linear": dp_reference.ref_linear,
    "pred1": dp_reference.ref_pred1,
    "cyclic": dp_reference.ref_cyclic,
    "general-k": dp_reference.ref_general,
}


def _finish(prep, value):
    return dp._exact(prep.extract(value)) if prep.base_ring.exact else float(prep.extract(value))


def run_variant(spec: SentenceSpec, variant: str, n: Optional[int] = None,
                fixed_order: bool = False, max_atoms: int = MAX_ATOMS) -> VariantResult:
    """Count ``spec`` with the named method.

    ``fixed_order`` asks for the count with the order fixed to 1 < ... < n
    (ignored without an axiom).
    """
    variant = canonical(variant)
    kind = _axiom_kind(spec)
    if variant == "native":
        r = dp.solve(spec, n=n, fixed_order=fixed_order)
        return VariantResult(r.value, r.peak_keys)
    if variant == "oracle":
        fn = oracle_wfomc_fixed_order if fixed_order and spec.axiom else oracle_wfomc_full
        return VariantResult(fn(spec, n=n, max_atoms=max_atoms), None)
    if variant == "legacy-encoding":
        if kind not in ("pred1", "cyclic"):
            raise SpecError("the legacy encoding needs a pred1 or cyclic axiom")
        m = spec.domain_size if n is None else n
        if m is not None and m < 2:
            raise SpecError("the legacy encoding needs at least two elements")
        r = dp.solve(legacy_encoding(spec), n=n, fixed_order=fixed_order)
        return VariantResult(r.value, r.peak_keys)

    prep = dp.prepare(spec, n)
    m = prep.n
    evidence = prep.pf.spec.evidence
    if variant == "plain":
        if kind != "plain":
            raise SpecError("the plain variant needs a spec without an axiom")
        stats = []
        total = dp.wfomc_plain(prep.tables, m, evidence, stats=stats)
        return VariantResult(_finish(prep, total), stats[0].peak_keys)
    if variant in _DIRECT:
        fn, allowed = _DIRECT[variant]
        if kind not in allowed:
            raise SpecError(f"the {variant} variant does not apply to a {kind} axiom")
        stats = []
        total = fn(prep.tables, m, fixed_order, evidence, stats=stats)
        return VariantResult(_finish(prep, total), max(s.peak_keys for s in stats))
    # reference
    if evidence:
        raise SpecError("the reference recurrences do not support evidence")
    if kind == "plain":
        value = dp_reference.ref_plain(prep.tables, m)
    else:
        value = _REFERENCE[kind](prep.tables, m, fixed_order=True)
        if not fixed_order:
            value = value * math.factorial(m)
    return VariantResult(_finish(prep, value), None)


def values_agree(a, b, rel: float = 1e-9) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        a, b = float(a), float(b)
        return math.isclose(a, b, rel_tol=rel, abs_tol=0.0) or a == b
    return a == b
