"""Incremental dynamic programs over cell configurations.

One engine serves every mode.  A state records how many placed elements sit
in each column class, the cells of the most recent ``window`` elements and,
for cycles, the cell of the first element.  Elements are appended one at a
time; the pair weight to every earlier element is either a predecessor table
entry (for elements in the window) or a power of the ordered pair table.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import kernel
from .normalize import PairwiseForm, pairwise_form
from .ring import Poly, PolyContext, PolyRing, Ring, _tidy, extract_cardinality, ring_for
from .syntax import CIRPRED, ORDER, PRED, Literal, SentenceSpec, SpecError, WFOMCError
from .tables import WeightTables, build_tables


class InternalError(WFOMCError):
    """An internal invariant was violated."""


class CancellationWarning(UserWarning):
    """Float result is much smaller than intermediate magnitudes."""


# digits of relative precision assumed lost before warning
CANCELLATION_DIGITS = 8


@dataclass
class RunStats:
    stage_keys: list = field(default_factory=list)
    stage_bounds: list = field(default_factory=list)
    p_eff: int = 0
    k_eff: int = 0
    max_magnitude: float = 0.0

    @property
    def peak_keys(self) -> int:
        return max(self.stage_keys, default=1)


def key_bound(p_eff: int, k_eff: int, h: int) -> int:
    """Upper bound on the number of states after ``h`` elements."""
    if p_eff == 0:
        return 1
    return p_eff ** k_eff * math.comb(h + p_eff - 1, p_eff - 1)


def _magnitude(v) -> float:
    if isinstance(v, Poly):
        return max((abs(float(c)) for c in v.terms.values()), default=0.0)
    return abs(float(v))


# -- compression -------------------------------------------------------------

@dataclass
class _Plan:
    col_class: list
    row_class: list
    powtab: list
    ncls: int


def _plan(r: list, p: int, n: int, one) -> _Plan:
    """Merge old cells with identical columns of ``r`` and tabulate powers."""
    col_class, reps, seen = [], [], {}
    for t in range(p):
        col = tuple(r[l][t] for l in range(p))
        c = seen.get(col)
        if c is None:
            c = seen[col] = len(reps)
            reps.append(t)
        col_class.append(c)
    row_class, row_reps, rows = [], [], {}
    for l in range(p):
        row = tuple(r[l][t] for t in reps)
        c = rows.get(row)
        if c is None:
            c = rows[row] = len(row_reps)
            row_reps.append(l)
        row_class.append(c)
    powtab = []
    for l in row_reps:
        per_class = []
        for t in reps:
            x = r[l][t]
            pw = [one]
            for _ in range(max(n - 1, 0)):
                pw.append(pw[-1] * x)
            per_class.append(pw)
        powtab.append(per_class)
    return _Plan(col_class, row_class, powtab, len(reps))


# -- choices -----------------------------------------------------------------

def _consistent(cell, lits) -> bool:
    return all(cell.value(pred) == positive for pred, positive in lits)


def _element_literals(evidence: Sequence[Literal], n: int) -> list:
    per = [set() for _ in range(n + 1)]
    for lit in evidence:
        if not 1 <= lit.index <= n:
            raise SpecError(f"evidence {lit} refers to element {lit.index} "
                            f"outside the domain 1..{n}")
        per[lit.index].add((lit.pred, lit.positive))
    return [tuple(sorted(s)) for s in per]


@dataclass
class _Choices:
    sizes: tuple                 # per-group capacities, () for a single group
    per_stage: Callable          # stage c (1-based) -> list of (group, cell)
    symbols: int                 # distinct (group, cell) pairs
    multiplier: int              # product of group-size factorials


def _staged_choices(cells, evidence, n) -> _Choices:
    """Element c must take a cell consistent with its own evidence."""
    lits = _element_literals(evidence, n)
    everything = [(0, l) for l in range(len(cells))]
    cache = {(): everything}
    for sig in lits:
        if sig not in cache:
            cache[sig] = [(0, l) for l, cell in enumerate(cells) if _consistent(cell, sig)]
    used = set()
    for c in range(1, n + 1):
        used.update(l for _, l in cache[lits[c]])
    return _Choices((), lambda c: cache[lits[c]], len(used), 1)


def _grouped_choices(cells, evidence, n) -> _Choices:
    """Elements with equal evidence are interchangeable; place groups, not elements."""
    lits = _element_literals(evidence, n)
    counts: dict = {}
    for c in range(1, n + 1):
        counts[lits[c]] = counts.get(lits[c], 0) + 1
    groups = sorted(counts)
    mult = 1
    for g in groups:
        mult *= math.factorial(counts[g])
    choices = [(gi, l) for gi, g in enumerate(groups)
               for l, cell in enumerate(cells) if _consistent(cell, g)]
    if len(groups) == 1:
        choices = [(0, l) for _, l in choices]
        return _Choices((), lambda c: choices, len(choices), mult)
    sizes = tuple(counts[g] for g in groups)
    return _Choices(sizes, lambda c: choices, len(choices), mult)


# -- integer scaling ---------------------------------------------------------

def _denominator(v) -> int:
    if isinstance(v, Fraction):
        return v.denominator
    if isinstance(v, Poly):
        return math.lcm(1, *(_denominator(c) for c in v.terms.values()))
    return 1


def _scale_matrix(m, d):
    return None if m is None else [[_tidy(x * d) for x in row] for row in m]


def _integerize(tables: WeightTables):
    """Clear denominators so the DP runs on integers.

    Every model multiplies exactly one cell weight per element and one pair
    weight per unordered pair, so scaling all cell weights by ``dw`` and all
    pair weights by ``dr`` scales the total by ``dw**n * dr**(n(n-1)/2)``.
    Returns the scaled tables and ``(dw, dr)``.
    """
    dw = math.lcm(1, *(_denominator(x) for x in tables.w))
    mats = [tables.r, *tables.r_tilde, tables.r_wrap, tables.r_both]
    dr = math.lcm(1, *(_denominator(x) for m in mats if m is not None
                       for row in m for x in row))
    if dw == 1 and dr == 1:
        return tables, (1, 1)
    scaled = replace(tables, w=[_tidy(x * dw) for x in tables.w], r=_scale_matrix(tables.r, dr),
                     r_tilde=[_scale_matrix(m, dr) for m in tables.r_tilde],
                     r_wrap=_scale_matrix(tables.r_wrap, dr),
                     r_both=_scale_matrix(tables.r_both, dr))
    return scaled, (dw, dr)


# -- engine ------------------------------------------------------------------

def run_engine(tables: WeightTables, n: int, choices: _Choices, *,
               trace: Optional[Callable] = None, check_bound: bool = True):
    """Sum of fixed-order weights over all placements; returns (total, stats)."""
    ring = tables.ring
    one, zero = ring.one, ring.zero
    p = tables.p
    stats = RunStats(p_eff=choices.symbols)
    track = not ring.exact
    if tables.cyclic and n < 2:
        raise SpecError("a cyclic order needs at least two elements")
    if n == 0:
        return one, stats
    scale = (1, 1)
    if ring.exact and trace is None:
        tables, scale = _integerize(tables)
    plan = _plan(tables.r, p, n, one)
    window = tables.k if tables.ordered else 0
    anchor = tables.cyclic
    stats.k_eff = window + (1 if anchor else 0)
    G = len(choices.sizes)
    start = (0,) * (G + plan.ncls) + (-1,) * (window + (1 if anchor else 0))
    table = {start: one}
    w = list(tables.w)
    r_tilde = [list(m) for m in tables.r_tilde]
    last = n - 1 if anchor else n
    for h in range(last):
        table = kernel.step(table, h, choices.per_stage(h + 1), choices.sizes, plan.ncls,
                            window, anchor, w, plan.powtab, r_tilde,
                            plan.col_class, plan.row_class, one)
        size = len(table)
        bound = key_bound(stats.p_eff, stats.k_eff, h + 1)
        stats.stage_keys.append(size)
        stats.stage_bounds.append(bound)
        if check_bound and size > bound:
            raise InternalError(f"{size} states after {h + 1} elements exceed the bound {bound}")
        if track:
            stats.max_magnitude = max(stats.max_magnitude,
                                      max((_magnitude(v) for v in table.values()), default=0.0))
        if trace is not None:
            trace(h + 1, table)
        if not table:
            return zero, stats
    if anchor:
        same = n == 2
        total = kernel.close_cyclic(table, choices.per_stage(n), choices.sizes, plan.ncls, w,
                                    plan.powtab, r_tilde[0],
                                    tables.r_both if same else tables.r_wrap,
                                    plan.col_class, plan.row_class, one, zero, same)
    else:
        total = zero
        for v in table.values():
            total = total + v
    if scale != (1, 1):
        total = total * Fraction(1, scale[0] ** n * scale[1] ** (n * (n - 1) // 2))
    if track:
        stats.max_magnitude = max(stats.max_magnitude, _magnitude(total))
    return total, stats


# -- public variants ---------------------------------------------------------

def _ordered_value(tables: WeightTables, n: int, evidence=(), fixed_order: bool = False,
                   trace=None):
    if not tables.ordered:
        raise ValueError("ordered tables required")
    if fixed_order:
        choices = _staged_choices(tables.cells, evidence, n)
    else:
        choices = _grouped_choices(tables.cells, evidence, n)
    total, stats = run_engine(tables, n, choices, trace=trace)
    return total, choices.multiplier, stats


def wfomc_plain(tables: WeightTables, n: int, evidence=(), trace=None,
                stats: Optional[list] = None):
    """Symmetric count with no order axiom."""
    if tables.ordered:
        raise ValueError("plain tables required")
    total, st = run_engine(tables, n, _staged_choices(tables.cells, evidence, n), trace=trace)
    if stats is not None:
        stats.append(st)
    return total


def _variant(expect):
    def run(tables: WeightTables, n: int, fixed_order: bool = False, evidence=(), trace=None,
            stats: Optional[list] = None):
        if not expect(tables):
            raise ValueError("tables were built for a different axiom")
        total, mult, st = _ordered_value(tables, n, evidence, fixed_order, trace)
        if stats is not None:
            stats.append(st)
        return total if mult == 1 else total * mult
    return run


wfomc_linear = _variant(lambda t: t.ordered and not t.cyclic and t.k == 0)
wfomc_pred1 = _variant(lambda t: t.ordered and not t.cyclic and t.k == 1)
wfomc_cyclic = _variant(lambda t: t.cyclic)
wfomc_general = _variant(lambda t: t.ordered and not t.cyclic)
wfomc_linear.__doc__ = "Linear order only; multiplies by the orderings unless fixed_order."
wfomc_pred1.__doc__ = "Linear order with the immediate predecessor."
wfomc_cyclic.__doc__ = "Linear order with the cyclic predecessor."
wfomc_general.__doc__ = "Linear order with predecessors pred1..predk."


# -- solving a spec ----------------------------------------------------------

def builtin_atom_count(kind: str, order: int, n: int) -> int:
    if kind == ORDER:
        return n * (n + 1) // 2
    if kind == PRED:
        return max(n - order, 0)
    if kind == CIRPRED:
        return n if n >= 2 else 0
    raise ValueError(kind)


@dataclass
class Prepared:
    """Normalised spec, ring and weight tables for one domain size."""

    spec: SentenceSpec
    n: int
    pf: PairwiseForm
    base_ring: Ring
    ring: Ring
    tables: WeightTables
    variables: tuple
    fixed_counts: dict

    def extract(self, value):
        if not self.spec.cardinalities:
            return value
        return extract_cardinality(value, self.spec.cardinalities, self.n,
                                   self.variables, self.fixed_counts)


def prepare(spec: SentenceSpec, n: Optional[int] = None, ring: Optional[str] = None,
            truncate: bool = True) -> Prepared:
    n = spec.domain_size if n is None else n
    if n is None:
        raise SpecError("no domain size given")
    if n < 0:
        raise SpecError("domain size must be non-negative")
    spec = spec.with_domain(n)
    if ring is not None:
        spec = spec.with_options(ring=ring)
    if spec.axiom is not None and spec.axiom.cyclic and n < 2:
        raise SpecError("a cyclic order needs at least two elements")
    base = ring_for(spec.options.ring)
    pf = pairwise_form(spec)
    _element_literals(pf.spec.evidence, n)

    fixed_counts, atom_counts = {}, {}
    for p in spec.vocabulary:
        if p.builtin:
            fixed_counts[p.name] = builtin_atom_count(p.kind, p.order, n)
            atom_counts[p.name] = fixed_counts[p.name]
        else:
            atom_counts[p.name] = n if p.arity == 1 else n * n
    for c in spec.cardinalities:
        if c.pred not in atom_counts:
            raise SpecError(f"cardinality constraint on undeclared predicate {c.pred!r}")
        b = c.resolve(n)
        if not 0 <= b <= atom_counts[c.pred]:
            raise SpecError(f"bound of {c} is {b} at n={n}, outside 0..{atom_counts[c.pred]}")
    variables = tuple(dict.fromkeys(c.pred for c in spec.cardinalities
                                    if c.pred not in fixed_counts))
    if variables:
        ctx = PolyContext.for_constraints(variables, spec.cardinalities, n,
                                          atom_counts, truncate)
        the_ring = PolyRing(base, ctx)
    else:
        the_ring = base
    tables = build_tables(pf, the_ring)
    return Prepared(spec, n, pf, base, the_ring, tables, variables, fixed_counts)


@dataclass
class SolveResult:
    value: object
    fixed_order_value: Optional[object]
    n: int
    ring: str
    cells: int
    total_cells: int
    peak_keys: int
    stage_keys: list
    stage_bounds: list
    seconds: float
    backend: str
    fixed_order: bool = False

    def render(self, v=None) -> str:
        v = self.value if v is None else v
        if isinstance(v, Fraction) and v.denominator == 1:
            v = v.numerator
        return repr(float(v)) if self.ring == "float" else str(v)


def solve(spec: SentenceSpec, n: Optional[int] = None, ring: Optional[str] = None,
          fixed_order: Optional[bool] = None, truncate: bool = True,
          trace: Optional[Callable] = None) -> SolveResult:
    """Weighted model count of ``spec`` over a domain of size ``n``.

    With an order axiom the result counts every linear order of the domain;
    ``fixed_order_value`` is the count for the order 1 < 2 < ... < n.
    """
    t0 = time.perf_counter()
    prep = prepare(spec, n, ring, truncate)
    spec, n, tables = prep.spec, prep.n, prep.tables
    if fixed_order is None:
        fixed_order = spec.options.fixed_order
    evidence = prep.pf.spec.evidence
    stats_all = []

    if spec.axiom is None:
        total, stats = run_engine(tables, n, _staged_choices(tables.cells, evidence, n),
                                  trace=trace)
        stats_all.append(stats)
        value = prep.extract(total)
        fixed_value = None
    else:
        f_total, f_mult, f_stats = _ordered_value(tables, n, evidence, True, trace)
        stats_all.append(f_stats)
        fixed_value = prep.extract(f_total)
        if fixed_order:
            value = fixed_value
        elif not evidence:
            value = fixed_value * math.factorial(n)
        else:
            total, mult, stats = _ordered_value(tables, n, evidence, False)
            stats_all.append(stats)
            value = prep.extract(total) * mult

    if not prep.base_ring.exact:
        value = float(value)
        fixed_value = None if fixed_value is None else float(fixed_value)
        mag = max(s.max_magnitude for s in stats_all)
        if mag and (value == 0 or mag / abs(value) > 10 ** CANCELLATION_DIGITS):
            warnings.warn(f"float result {value!r} is far below intermediate magnitude "
                          f"{mag:.3g}; cancellation may have destroyed precision",
                          CancellationWarning, stacklevel=2)
    else:
        value = _exact(value)
        fixed_value = None if fixed_value is None else _exact(fixed_value)

    peak = max(s.peak_keys for s in stats_all)
    main = stats_all[-1]
    return SolveResult(value, fixed_value, n, prep.base_ring.name, tables.p, tables.total_cells,
                       peak, main.stage_keys, main.stage_bounds,
                       time.perf_counter() - t0, kernel.active_backend(), fixed_order)


def _exact(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    if isinstance(v, Poly):
        raise InternalError("unextracted polynomial result")
    return v
