"""Cell self-weights and pair weights, computed by enumerating 2-tables.

Pair tables are indexed ``[new][old]``: entry ``[l][t]`` is the weight of all
binary atoms between a newly appended element in cell ``l`` and an earlier
element in cell ``t``.  Evaluation is vectorised over all cell pairs with
numpy; the weights themselves are combined in the target ring.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .normalize import Cell, PairwiseForm, cell_atoms
from .ring import PolyRing, Ring
from .syntax import (
    CIRPRED, ORDER, PRED, And, Atom, Formula, Iff, Implies, Not, Or, SpecError, Truth,
)

MAX_CELL_ATOMS = 24


def _eval(f: Formula, lookup: Callable):
    """Evaluate a quantifier-free formula; values are bools or numpy bool arrays."""
    if isinstance(f, Atom):
        return lookup(f)
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Not):
        v = _eval(f.arg, lookup)
        return (not v) if isinstance(v, bool) else ~v
    if isinstance(f, (And, Or)):
        absorbing = isinstance(f, Or)
        a = _eval(f.left, lookup)
        if isinstance(a, bool) and a == absorbing:
            return a
        b = _eval(f.right, lookup)
        if isinstance(b, bool):
            return a if b != absorbing else b
        if isinstance(a, bool):
            return b
        return (a | b) if absorbing else (a & b)
    if isinstance(f, Implies):
        return _eval(Or(Not(f.left), f.right), lookup)
    if isinstance(f, Iff):
        a, b = _eval(f.left, lookup), _eval(f.right, lookup)
        if isinstance(a, bool) and isinstance(b, bool):
            return a == b
        return ~(np.asarray(a) ^ np.asarray(b))
    raise TypeError(f"cannot evaluate {type(f).__name__}")


class Weighting:
    """Ring weights of positive and negative literals of every ordinary predicate."""

    def __init__(self, pf: PairwiseForm, ring: Ring):
        self.ring = ring
        self.pos, self.neg = {}, {}
        poly_vars = ring.ctx.variables if isinstance(ring, PolyRing) else ()
        for p in pf.ordinary:
            wp = ring.lift(p.weight_pos)
            if p.name in poly_vars:
                wp = ring.var(p.name) * wp
            self.pos[p.name] = wp
            self.neg[p.name] = ring.lift(p.weight_neg)

    def literal(self, pred: str, value: bool):
        return self.pos[pred] if value else self.neg[pred]


def cell_matrix(m: int) -> np.ndarray:
    """All 2^m sign vectors, all-true first, first atom most significant."""
    if m > MAX_CELL_ATOMS:
        raise SpecError(f"{m} cell atoms exceed the supported maximum of {MAX_CELL_ATOMS}")
    idx = np.arange(1 << m, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1) == 0


# Built-in values: keys are (kind, pattern) where the pattern names the argument
# pair among the new element "a" and the old element "b".
FixedFn = Callable[[str, int, str], bool]


def _builtin_kinds(pf: PairwiseForm) -> dict:
    return {p.name: (p.kind, p.order) for p in pf.vocabulary if p.builtin}


def self_order_value(kind: str, order: int, pattern: str) -> bool:
    """Built-in atom on (c, c)."""
    return kind == ORDER


def pair_order_fn(pred_true: Optional[int] = None, wrap: bool = False, both: bool = False,
                  cyclic_forward: bool = False) -> FixedFn:
    """Built-in values for a pair (a = new, b = old) with b before a.

    ``pred_true``: the predecessor order s with Pred_s(b, a) true.
    ``cyclic_forward``: CirPred(b, a) true.  ``wrap``: CirPred(a, b) true.
    ``both``: CirPred true in both directions.
    """
    def fn(kind: str, order: int, pattern: str) -> bool:
        if pattern in ("aa", "bb"):
            return kind == ORDER
        if kind == ORDER:
            return pattern == "ba"
        if kind == PRED:
            return pred_true == order and pattern == "ba"
        if kind == CIRPRED:
            if both:
                return True
            if wrap:
                return pattern == "ab"
            return cyclic_forward and pattern == "ba"
        raise AssertionError(kind)
    return fn


class _CellContext:
    def __init__(self, pf: PairwiseForm, cm: np.ndarray):
        self.pf = pf
        self.atoms = cell_atoms(pf)
        self.col = {a: i for i, a in enumerate(self.atoms)}
        self.cm = cm
        self.builtins = _builtin_kinds(pf)
        self.binaries = sorted(p.name for p in pf.ordinary if p.arity == 2)

    def self_mask(self) -> np.ndarray:
        """psi(c, c) for every cell."""
        cm = self.cm

        def lookup(a: Atom):
            if a.pred in self.builtins:
                kind, order = self.builtins[a.pred]
                return self_order_value(kind, order, "aa")
            return cm[:, self.col[a.pred]]

        v = _eval(self.pf.matrix, lookup)
        return np.broadcast_to(np.asarray(v, dtype=bool), (cm.shape[0],)).copy()

    def pair_masks(self, fixed: FixedFn):
        """Yield (signature, mask[a_cell, b_cell]) for each assignment of cross atoms."""
        cm = self.cm
        p = cm.shape[0]
        cross = [(r, d) for r in self.binaries for d in ("ab", "ba")]
        for bits in itertools.product((True, False), repeat=len(cross)):
            sigma = dict(zip(cross, bits))

            def make_lookup(x_is_a: bool):
                def lookup(atom: Atom):
                    names = [t.name for t in atom.args]
                    if len(names) == 1 or names[0] == names[1]:
                        if atom.pred in self.builtins:
                            kind, order = self.builtins[atom.pred]
                            pat = "aa" if (names[0] == "x") == x_is_a else "bb"
                            return fixed(kind, order, pat)
                        column = cm[:, self.col[atom.pred]]
                        on_a = (names[0] == "x") == x_is_a
                        return column[:, None] if on_a else column[None, :]
                    pat = "ab" if (names[0] == "x") == x_is_a else "ba"
                    if atom.pred in self.builtins:
                        kind, order = self.builtins[atom.pred]
                        return fixed(kind, order, pat)
                    return sigma[(atom.pred, pat)]
                return lookup

            m1 = _eval(self.pf.matrix, make_lookup(True))
            if isinstance(m1, bool) and not m1:
                continue
            m2 = _eval(self.pf.matrix, make_lookup(False))
            mask = np.broadcast_to(np.asarray(m1, dtype=bool) & np.asarray(m2, dtype=bool), (p, p))
            signature = tuple(int(sigma[(r, "ab")]) + int(sigma[(r, "ba")]) for r in self.binaries)
            yield signature, mask


def _combine(ctx: _CellContext, weighting: Weighting, fixed: FixedFn) -> list:
    """Pair table [a][b] = sum over 2-tables of their weights."""
    p = ctx.cm.shape[0]
    counts: dict = {}
    for sig, mask in ctx.pair_masks(fixed):
        acc = counts.get(sig)
        if acc is None:
            counts[sig] = mask.astype(np.int64)
        else:
            acc += mask
    ring = weighting.ring
    table = [[ring.zero] * p for _ in range(p)]
    for sig in sorted(counts, reverse=True):
        w = ring.one
        for r, t in zip(ctx.binaries, sig):
            w = w * weighting.literal(r, True) ** t * weighting.literal(r, False) ** (2 - t)
        c = counts[sig]
        nz = np.argwhere(c)
        for i, j in nz:
            table[i][j] = table[i][j] + int(c[i, j]) * w
    return table


def _cell_weight(cell_values, atoms, weighting: Weighting):
    w = weighting.ring.one
    for a, v in zip(atoms, cell_values):
        w = w * weighting.literal(a, bool(v))
    return w


@dataclass
class WeightTables:
    cells: list                  # surviving Cell objects, canonical order
    ring: Ring
    ordered: bool
    w: list                      # w_i (plain) or w_hat_i (ordered)
    r: list                      # r_ij (plain) or r_hat [new][old]
    r_tilde: list = field(default_factory=list)   # one [new][old] matrix per s = 1..k
    r_wrap: Optional[list] = None
    r_both: Optional[list] = None
    k: int = 0
    cyclic: bool = False
    total_cells: int = 0

    @property
    def p(self) -> int:
        return len(self.cells)


def _surviving(pf: PairwiseForm, ring: Ring):
    atoms = cell_atoms(pf)
    cm_all = cell_matrix(len(atoms))
    ctx_all = _CellContext(pf, cm_all)
    ok = ctx_all.self_mask()
    weighting = Weighting(pf, ring)
    cells, weights = [], []
    for i in np.flatnonzero(ok):
        w = _cell_weight(cm_all[i], atoms, weighting)
        if w:
            cells.append(Cell(int(i), atoms, tuple(bool(v) for v in cm_all[i])))
            weights.append(w)
    cm = cm_all[[c.index for c in cells]] if cells else np.zeros((0, len(atoms)), dtype=bool)
    return cells, weights, _CellContext(pf, cm), weighting, cm_all.shape[0]


def compute_plain_tables(pf: PairwiseForm, cells, ring: Ring):
    """(w, r) for the given cells; w_i is zero when psi(c, c) fails."""
    atoms = cell_atoms(pf)
    cm = np.array([c.values for c in cells], dtype=bool).reshape(len(cells), len(atoms))
    ctx = _CellContext(pf, cm)
    weighting = Weighting(pf, ring)
    ok = ctx.self_mask()
    w = [_cell_weight(c.values, atoms, weighting) if ok[i] else ring.zero
         for i, c in enumerate(cells)]
    r = _combine(ctx, weighting, pair_order_fn())
    return w, r


def compute_ordered_tables(pf: PairwiseForm, cells, ring: Ring, k: int = 0):
    """(w_hat, r_hat, r_tilde) with r_tilde[s-1] for s = 1..k, all indexed [new][old]."""
    atoms = cell_atoms(pf)
    cm = np.array([c.values for c in cells], dtype=bool).reshape(len(cells), len(atoms))
    ctx = _CellContext(pf, cm)
    weighting = Weighting(pf, ring)
    ok = ctx.self_mask()
    w_hat = [_cell_weight(c.values, atoms, weighting) if ok[i] else ring.zero
             for i, c in enumerate(cells)]
    r_hat = _combine(ctx, weighting, pair_order_fn())
    declared = {p.order for p in pf.vocabulary if p.kind == PRED}
    r_tilde = [_combine(ctx, weighting, pair_order_fn(pred_true=s)) if s in declared else r_hat
               for s in range(1, k + 1)]
    return w_hat, r_hat, r_tilde


def build_tables(pf: PairwiseForm, ring: Ring) -> WeightTables:
    """Prune dead cells and compute every table the axiom of ``pf`` needs."""
    axiom = pf.spec.axiom
    cells, weights, ctx, weighting, total = _surviving(pf, ring)
    if axiom is None:
        r = _combine(ctx, weighting, pair_order_fn())
        return WeightTables(cells, ring, False, weights, r, total_cells=total)
    r_hat = _combine(ctx, weighting, pair_order_fn())
    if axiom.cyclic:
        r_cyc = _combine(ctx, weighting, pair_order_fn(cyclic_forward=True))
        r_wrap = _combine(ctx, weighting, pair_order_fn(wrap=True))
        r_both = _combine(ctx, weighting, pair_order_fn(both=True))
        return WeightTables(cells, ring, True, weights, r_hat, [r_cyc], r_wrap, r_both,
                            k=1, cyclic=True, total_cells=total)
    k = axiom.max_order
    declared = set(axiom.preds)
    r_tilde = [_combine(ctx, weighting, pair_order_fn(pred_true=s)) if s in declared else r_hat
               for s in range(1, k + 1)]
    return WeightTables(cells, ring, True, weights, r_hat, r_tilde, k=k, total_cells=total)


def dump_tables(tables: WeightTables, path) -> None:
    """Write every entry as CSV: table, cell index, cell index, s, value."""
    render = tables.ring.render
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["table", "i", "j", "s", "value"])
        idx = [c.index for c in tables.cells]
        name = "w_hat" if tables.ordered else "w"
        for a, w in zip(idx, tables.w):
            out.writerow([name, a, "", 0, render(w)])
        mats = [("r_hat" if tables.ordered else "r", 0, tables.r)]
        mats += [("r_tilde", s + 1, m) for s, m in enumerate(tables.r_tilde)]
        if tables.r_wrap is not None:
            mats += [("r_wrap", 1, tables.r_wrap), ("r_both", 1, tables.r_both)]
        for label, s, m in mats:
            for a, row in zip(idx, m):
                for b, v in zip(idx, row):
                    out.writerow([label, a, b, s, render(v)])
