"""Brute-force ground model counting for tiny domains.

This module is the independent reference for everything else.  It evaluates
the sentence exactly as written (nested quantifiers included) over every
assignment of the free ground atoms, and deliberately shares no evaluation
code with the normaliser, the table builder or the dynamic programs.

Worlds are enumerated in chunks as integers; bit ``j`` of a world is the truth
value of free atom ``j``.  Cardinality constraints are applied by counting
true atoms per predicate and filtering.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Optional

import numpy as np

from .syntax import (
    CIRPRED, ORDER, PRED, And, Atom, Const, Exists, Forall, Iff, Implies, Not, Or,
    SentenceSpec, SpecError, Truth, WFOMCError,
)

MAX_ATOMS = 26
CHUNK_BITS = 20


class OracleLimitError(WFOMCError):
    """Too many free ground atoms to enumerate."""


def _weight(lit, ring: str):
    if ring == "float":
        return math.exp(float(lit.text)) if lit.kind == "exp" else float(lit.value)
    if lit.kind == "exp":
        raise SpecError(f"weight {lit} needs ring=float")
    return lit.value


def _builtin_value(kind: str, order: int, a: int, b: int, n: int) -> bool:
    if kind == ORDER:
        return a <= b
    if kind == PRED:
        return b == a + order
    if kind == CIRPRED:
        return b == a + 1 or (a == n and b == 1)
    raise ValueError(kind)


def _dead(v) -> bool:
    """False everywhere in the current chunk."""
    return v is False or (not isinstance(v, bool) and not v.any())


def _and(a, b):
    if isinstance(a, bool) and isinstance(b, bool):
        return a and b
    return a & b


def _or(a, b):
    if isinstance(a, bool) and isinstance(b, bool):
        return a or b
    return a | b


class _Ground:
    """Free atoms, fixed atoms and the evaluator for one (spec, n, evidence)."""

    def __init__(self, spec: SentenceSpec, n: int, evidence, const_map, max_atoms: int):
        self.spec = spec
        self.n = n
        self.const_map = const_map
        self.builtins = {p.name: p for p in spec.vocabulary if p.builtin}
        fixed = {}
        for pred, index, positive in evidence:
            key = (pred, (index,))
            if fixed.get(key, positive) != positive:
                self.contradiction = True
                break
            fixed[key] = positive
        else:
            self.contradiction = False
        self.fixed = fixed
        self.index = {}
        self.ranges = {}
        self.total = {}
        # later predicates take the low bits, so constraints on the first
        # declared ones tend to rule out whole chunks at once
        for p in reversed(spec.vocabulary):
            if p.builtin:
                continue
            start = len(self.index)
            tuples = list(itertools.product(range(1, n + 1), repeat=p.arity))
            self.total[p.name] = len(tuples)
            for args in tuples:
                if (p.name, args) not in fixed:
                    self.index[(p.name, args)] = len(self.index)
            self.ranges[p.name] = (start, len(self.index) - start)
        self.m = len(self.index)
        if self.m > max_atoms:
            raise OracleLimitError(f"{self.m} free ground atoms exceed the cap of {max_atoms}")

    def fixed_true(self, pred: str) -> int:
        return sum(1 for (p, _), v in self.fixed.items() if p == pred and v)

    # evaluation over a chunk of worlds
    def evaluate(self, worlds: np.ndarray):
        self.worlds = worlds
        self.bits = {}
        return self._eval(self.spec.formula, {})

    def _atom_bits(self, j: int) -> np.ndarray:
        b = self.bits.get(j)
        if b is None:
            b = ((self.worlds >> np.uint64(j)) & np.uint64(1)).astype(bool)
            self.bits[j] = b
        return b

    def _term(self, t, env):
        if isinstance(t, Const):
            return self.const_map.get(t.index, t.index)
        return env[t.name]

    def _eval(self, f, env):
        if isinstance(f, Truth):
            return f.value
        if isinstance(f, Atom):
            args = tuple(self._term(t, env) for t in f.args)
            b = self.builtins.get(f.pred)
            if b is not None:
                return _builtin_value(b.kind, b.order, args[0], args[1], self.n)
            key = (f.pred, args)
            if key in self.fixed:
                return self.fixed[key]
            return self._atom_bits(self.index[key])
        if isinstance(f, Not):
            v = self._eval(f.arg, env)
            return (not v) if isinstance(v, bool) else ~v
        if isinstance(f, (And, Or, Implies, Iff)):
            a = self._eval(f.left, env)
            if isinstance(f, And) and _dead(a):
                return False
            b = self._eval(f.right, env)
            if isinstance(f, And):
                return _and(a, b)
            if isinstance(f, Or):
                return _or(a, b)
            if isinstance(f, Implies):
                if isinstance(a, bool) and isinstance(b, bool):
                    return (not a) or b
                return ~np.asarray(a) | b
            if isinstance(a, bool) and isinstance(b, bool):
                return a == b
            return ~(np.asarray(a) ^ np.asarray(b))
        if isinstance(f, Forall):
            acc = True
            for d in range(1, self.n + 1):
                acc = _and(acc, self._eval(f.body, {**env, f.var: d}))
                if _dead(acc):
                    return False
            return acc
        if isinstance(f, Exists):
            acc = False
            for d in range(1, self.n + 1):
                acc = _or(acc, self._eval(f.body, {**env, f.var: d}))
            return acc
        raise TypeError(f"cannot evaluate {type(f).__name__}")


def _builtin_count(kind: str, order: int, n: int) -> int:
    return sum(_builtin_value(kind, order, a, b, n)
               for a in range(1, n + 1) for b in range(1, n + 1))


def _fixed_order_sum(spec: SentenceSpec, n: int, ring: str, evidence, const_map,
                     max_atoms: int):
    g = _Ground(spec, n, evidence, const_map, max_atoms)
    zero = 0.0 if ring == "float" else 0
    if g.contradiction:
        return zero
    ordinary = [p for p in spec.vocabulary if not p.builtin]
    for c in spec.cardinalities:
        b = g.builtins.get(c.pred)
        if b is not None and not c.holds(_builtin_count(b.kind, b.order, n), n):
            return zero

    # histogram of satisfying worlds by per-predicate free-true counts
    radix = [g.ranges[p.name][1] + 1 for p in ordinary]
    strides = [int(np.prod(radix[:i])) for i in range(len(radix))]
    size = int(np.prod(radix)) if radix else 1
    hist = np.zeros(size, dtype=np.int64)
    total_worlds = 1 << g.m
    chunk = 1 << min(CHUNK_BITS, g.m)
    for base in range(0, total_worlds, chunk):
        worlds = np.arange(base, base + chunk, dtype=np.uint64)
        sat = g.evaluate(worlds)
        if isinstance(sat, bool):
            if not sat:
                continue
            sat = np.ones(chunk, dtype=bool)
        sel = worlds[sat]
        if not sel.size:
            continue
        code = np.zeros(sel.size, dtype=np.int64)
        for p, stride in zip(ordinary, strides):
            start, length = g.ranges[p.name]
            if length:
                mask = np.uint64((1 << length) - 1)
                t = np.bitwise_count((sel >> np.uint64(start)) & mask).astype(np.int64)
                code += t * stride
        hist += np.bincount(code, minlength=size)

    pos = {p.name: _weight(p.weight_pos, ring) for p in ordinary}
    neg = {p.name: _weight(p.weight_neg, ring) for p in ordinary}
    fixed_true = {p.name: g.fixed_true(p.name) for p in ordinary}
    terms = []
    for code in np.flatnonzero(hist):
        rest = int(code)
        counts = {}
        for p, r in zip(ordinary, radix):
            counts[p.name] = rest % r + fixed_true[p.name]
            rest //= r
        if not all(c.holds(counts[c.pred], n) for c in spec.cardinalities
                   if c.pred in counts):
            continue
        w = int(hist[code])
        for p in ordinary:
            t = counts[p.name]
            w = w * pos[p.name] ** t * neg[p.name] ** (g.total[p.name] - t)
        terms.append(w)
    if ring == "float":
        return math.fsum(terms)
    total = sum(terms, Fraction(0))
    return total.numerator if total.denominator == 1 else total


def _formula_constants(f) -> set:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.update(t.index for t in g.args if isinstance(t, Const))
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Implies, Iff)):
            stack += [g.left, g.right]
        elif isinstance(g, (Forall, Exists)):
            stack.append(g.body)
    return out


def _setup(spec: SentenceSpec, n: Optional[int], ring: Optional[str]):
    n = spec.domain_size if n is None else n
    if n is None:
        raise SpecError("no domain size given")
    if spec.axiom is not None and spec.axiom.cyclic and n < 2:
        raise SpecError("a cyclic order needs at least two elements")
    ring = ring or spec.options.ring
    evidence = [(lit.pred, lit.index, lit.positive) for lit in spec.evidence]
    for _, i, _ in evidence:
        if not 1 <= i <= n:
            raise SpecError(f"evidence element {i} outside the domain 1..{n}")
    return n, ring, evidence


def oracle_wfomc_fixed_order(spec: SentenceSpec, n: Optional[int] = None,
                             ring: Optional[str] = None, max_atoms: int = MAX_ATOMS):
    """Weighted count with the built-in order fixed to 1 < 2 < ... < n."""
    n, ring, evidence = _setup(spec, n, ring)
    return _fixed_order_sum(spec, n, ring, evidence, {}, max_atoms)


def oracle_wfomc_full(spec: SentenceSpec, n: Optional[int] = None,
                      ring: Optional[str] = None, max_atoms: int = MAX_ATOMS):
    """Weighted count summed over every linear order of the domain.

    Elements named by evidence or constants keep their identity while the
    order varies, so they are relocated to every combination of positions;
    the remaining elements are interchangeable and contribute a factorial.
    """
    n, ring, evidence = _setup(spec, n, ring)
    if spec.axiom is None:
        return _fixed_order_sum(spec, n, ring, evidence, {}, max_atoms)
    consts = _formula_constants(spec.formula)
    if any(i > n for i in consts):
        raise SpecError("constant outside the domain")
    named = sorted({i for _, i, _ in evidence} | consts)
    free = math.factorial(n - len(named))
    memo = {}
    total = 0.0 if ring == "float" else 0
    for image in itertools.permutations(range(1, n + 1), len(named)):
        cmap = dict(zip(named, image))
        moved = tuple(sorted((p, cmap[i], v) for p, i, v in evidence))
        key = (moved, tuple(cmap[i] for i in sorted(consts)))
        v = memo.get(key)
        if v is None:
            v = memo[key] = _fixed_order_sum(spec, n, ring, list(moved), cmap, max_atoms)
        total = total + v
    total = total * free
    if isinstance(total, Fraction) and total.denominator == 1:
        return total.numerator
    return total
