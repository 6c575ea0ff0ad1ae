"""Reduction to the universal pairwise form and cell enumeration.

Every supported sentence is rewritten to ``forall x forall y: psi(x, y)`` with
``psi`` quantifier free.  Existentials are removed with fresh Skolem predicates
of weight ``(1, -1)``; quantified subformulas nested inside a clause are first
named by auxiliary unary predicates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    AUX, BINARY, MINUS_ONE, ONE, SKOLEM, And, Atom, Const, Exists, Forall, Formula,
    Iff, Implies, Literal, Not, Or, Predicate, SentenceSpec, SpecError, Truth, Var,
    conjoin, conjuncts, free_vars, is_quantifier_free, rename, subformulas,
)

TRUE = Truth(True)
FALSE = Truth(False)


def to_nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form; implications and equivalences are expanded."""
    if isinstance(f, Truth):
        return f if positive else Truth(not f.value)
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return to_nnf(f.arg, not positive)
    if isinstance(f, And):
        op = And if positive else Or
        return op(to_nnf(f.left, positive), to_nnf(f.right, positive))
    if isinstance(f, Or):
        op = Or if positive else And
        return op(to_nnf(f.left, positive), to_nnf(f.right, positive))
    if isinstance(f, Implies):
        if positive:
            return Or(to_nnf(f.left, False), to_nnf(f.right, True))
        return And(to_nnf(f.left, True), to_nnf(f.right, False))
    if isinstance(f, Iff):
        a, b = f.left, f.right
        if positive:
            return And(Or(to_nnf(a, False), to_nnf(b, True)), Or(to_nnf(b, False), to_nnf(a, True)))
        return And(Or(to_nnf(a, True), to_nnf(b, True)), Or(to_nnf(a, False), to_nnf(b, False)))
    if isinstance(f, Forall):
        return (Forall if positive else Exists)(f.var, to_nnf(f.body, positive))
    if isinstance(f, Exists):
        return (Exists if positive else Forall)(f.var, to_nnf(f.body, positive))
    raise TypeError(f)


def _other(var: str) -> str:
    return "y" if var == "x" else "x"


class _Normalizer:
    def __init__(self, spec: SentenceSpec):
        self.spec = spec
        self.names = {p.name for p in spec.vocabulary}
        self.new_preds: list = []
        self.clauses: list = []
        self.evidence: list = list(spec.evidence)
        self.aux_cache: dict = {}

    def fresh(self, prefix: str, kind: str, weight_neg) -> str:
        i = 0
        while f"{prefix}_{i}" in self.names:
            i += 1
        name = f"{prefix}_{i}"
        self.names.add(name)
        self.new_preds.append(Predicate(name, 1, kind, ONE, weight_neg))
        return name

    # top level ---------------------------------------------------------

    def sentence(self, f: Formula):
        for c in conjuncts(f):
            self.conjunct(c)

    def conjunct(self, c: Formula):
        if isinstance(c, Truth):
            if not c.value:
                self.clauses.append(FALSE)
            return
        if isinstance(c, Forall):
            self.universal(c.var, c.body)
            return
        if isinstance(c, Exists):
            raise SpecError("top-level existential quantifiers are not supported; "
                            "use 'forall x exists y' or evidence")
        lit = _ground_literal(c)
        if lit is None:
            raise SpecError("ground subformulas must be unary literals such as A(3) or ~A(3)")
        self.evidence.append(lit)

    def universal(self, u: str, body: Formula):
        if u not in free_vars(body) and not (isinstance(body, Exists) and body.var != u):
            # vacuous on a non-empty domain; body is closed here
            self.sentence(body)
            return
        if isinstance(body, And):
            self.universal(u, body.left)
            self.universal(u, body.right)
            return
        if isinstance(body, Forall):
            v = body.var
            if v == u:
                self.universal(u, body.body)
                return
            inner = body.body
            if isinstance(inner, And):
                self.universal(u, Forall(v, inner.left))
                self.universal(u, Forall(v, inner.right))
                return
            self.add_clause(rename(self.flatten(inner), {u: "x", v: "y"}))
            return
        if isinstance(body, Exists) and body.var != u:
            v = body.var
            inner = rename(self.flatten(body.body), {u: "x", v: "y"})
            s = self.fresh("S", SKOLEM, MINUS_ONE)
            self.add_clause(Or(Atom(s, (Var("x"),)), to_nnf(inner, False)))
            return
        if isinstance(body, Exists):
            raise SpecError("top-level existential quantifiers are not supported")
        self.add_clause(rename(self.flatten(body), {u: "x", _other(u): "y"}))

    def add_clause(self, clause: Formula):
        for g in subformulas(clause):
            if isinstance(g, Atom) and any(isinstance(t, Const) for t in g.args):
                raise SpecError("constants are only supported in top-level unary literals "
                                "(evidence), not inside quantified formulas")
        self.clauses.append(clause)

    # nested quantifiers ------------------------------------------------

    def flatten(self, f: Formula) -> Formula:
        if isinstance(f, (Atom, Truth)):
            return f
        if isinstance(f, Not):
            return Not(self.flatten(f.arg))
        if isinstance(f, BINARY):
            return type(f)(self.flatten(f.left), self.flatten(f.right))
        if isinstance(f, Forall):
            # forall w: g  ==  not exists w: not g
            return Not(self.aux(f.var, self.flatten(to_nnf(f.body, False))))
        if isinstance(f, Exists):
            return self.aux(f.var, self.flatten(f.body))
        raise TypeError(f)

    def aux(self, w: str, e: Formula) -> Atom:
        """Name ``exists w: e`` by a fresh unary Z with Z(z) <-> exists w: e(z, w)."""
        fv = free_vars(Exists(w, e))
        if not fv:
            raise SpecError("closed quantified subformulas nested inside another "
                            "quantifier are not supported")
        (z,) = tuple(fv)
        e_xy = rename(e, {z: "x", w: "y"})
        name = self.aux_cache.get(e_xy)
        if name is None:
            name = self.fresh("Z", AUX, ONE)
            self.aux_cache[e_xy] = name
            zx = Atom(name, (Var("x"),))
            not_e = to_nnf(e_xy, False)
            self.add_clause(Or(not_e, zx))
            s = self.fresh("S", SKOLEM, MINUS_ONE)
            self.add_clause(Or(Atom(s, (Var("x"),)), And(zx, not_e)))
        return Atom(name, (Var(z),))


def _ground_literal(f: Formula) -> Optional[Literal]:
    positive = True
    if isinstance(f, Not):
        positive, f = False, f.arg
    if isinstance(f, Atom) and len(f.args) == 1 and isinstance(f.args[0], Const):
        return Literal(f.pred, f.args[0].index, positive)
    return None


def skolemize(spec: SentenceSpec) -> SentenceSpec:
    """Return an equivalent spec of shape ``forall x forall y: psi`` (psi quantifier free)."""
    norm = _Normalizer(spec)
    norm.sentence(to_nnf(spec.formula))
    for lit in norm.evidence:
        p = next((q for q in spec.vocabulary if q.name == lit.pred), None)
        if p is None or p.builtin or p.arity != 1:
            raise SpecError(f"evidence {lit} must use a declared unary predicate")
    matrix = conjoin(norm.clauses)
    vocab = [p for p in spec.vocabulary if not p.builtin] + norm.new_preds
    vocab += [p for p in spec.vocabulary if p.builtin]
    return spec.replace(
        vocabulary=tuple(vocab),
        formula=Forall("x", Forall("y", matrix)),
        evidence=tuple(dict.fromkeys(norm.evidence)),
    )


@dataclass(frozen=True)
class PairwiseForm:
    """``forall x forall y: matrix`` together with its extended vocabulary."""

    matrix: Formula
    spec: SentenceSpec

    @property
    def vocabulary(self) -> tuple:
        return self.spec.vocabulary

    @property
    def ordinary(self) -> list:
        return [p for p in self.spec.vocabulary if not p.builtin]

    def predicate(self, name: str) -> Predicate:
        return self.spec.predicate(name)


def pairwise_form(spec: SentenceSpec) -> PairwiseForm:
    sk = skolemize(spec)
    return PairwiseForm(sk.formula.body.body, sk)


# -- cells -------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    index: int
    atoms: tuple      # predicate names, canonical order
    values: tuple     # one bool per atom

    def value(self, pred: str) -> bool:
        return self.values[self.atoms.index(pred)]

    def __str__(self) -> str:
        return "{" + ", ".join(("" if v else "~") + a for a, v in zip(self.atoms, self.values)) + "}"


def cell_atoms(pf: PairwiseForm) -> tuple:
    """Canonical atom order: by predicate name (each name contributes one atom)."""
    return tuple(sorted(p.name for p in pf.ordinary))


def enumerate_cells(pf: PairwiseForm) -> list:
    atoms = cell_atoms(pf)
    return [Cell(i, atoms, vals)
            for i, vals in enumerate(itertools.product((True, False), repeat=len(atoms)))]


# -- conditioning ------------------------------------------------------------

def _simplify(f: Formula, lookup) -> Formula:
    if isinstance(f, Truth):
        return f
    if isinstance(f, Atom):
        v = lookup(f)
        return f if v is None else Truth(v)
    if isinstance(f, Not):
        a = _simplify(f.arg, lookup)
        if isinstance(a, Truth):
            return Truth(not a.value)
        if isinstance(a, Not):
            return a.arg
        return Not(a)
    if isinstance(f, (Implies, Iff)):
        return _simplify(to_nnf(f), lookup)
    left = _simplify(f.left, lookup)
    right = _simplify(f.right, lookup)
    absorbing = isinstance(f, Or)  # true absorbs Or, false absorbs And
    for a, b in ((left, right), (right, left)):
        if isinstance(a, Truth):
            return a if a.value == absorbing else b
    return type(f)(left, right)


def _evaluate(f: Formula, assignment: dict) -> bool:
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Atom):
        return assignment[f]
    if isinstance(f, Not):
        return not _evaluate(f.arg, assignment)
    if isinstance(f, And):
        return _evaluate(f.left, assignment) and _evaluate(f.right, assignment)
    if isinstance(f, Or):
        return _evaluate(f.left, assignment) or _evaluate(f.right, assignment)
    if isinstance(f, Implies):
        return (not _evaluate(f.left, assignment)) or _evaluate(f.right, assignment)
    if isinstance(f, Iff):
        return _evaluate(f.left, assignment) == _evaluate(f.right, assignment)
    raise TypeError(f)


@dataclass(frozen=True)
class ConditionedPair:
    i: int
    j: int
    formula: Formula    # simplified psi(x,y) & psi(y,x)
    atoms: tuple        # (predicate, "xy" | "yx") in enumeration order
    table: tuple        # truth value per assignment, first atom is the most significant bit

    def satisfied(self, assignment: dict) -> bool:
        bits = 0
        for pred, direction in self.atoms:
            bits = (bits << 1) | int(assignment[(pred, direction)])
        return self.table[bits]


def condition_pair(pf: PairwiseForm, i: int, j: int, cells=None,
                   order: Optional[dict] = None) -> ConditionedPair:
    """Substitute the cell literals of x (cell i) and y (cell j) into psi(x,y) & psi(y,x).

    ``order`` fixes built-in atoms: keys ``(pred, "xy" | "yx" | "xx" | "yy")``.
    """
    cells = cells if cells is not None else enumerate_cells(pf)
    ci, cj = cells[i], cells[j]
    binaries = sorted(p.name for p in pf.ordinary if p.arity == 2)
    builtin = {p.name for p in pf.vocabulary if p.builtin}

    def lookup(a: Atom):
        names = tuple(t.name for t in a.args)
        if a.pred in builtin:
            key = (a.pred, "".join(names))
            if order is None or key not in order:
                raise SpecError(f"no value fixed for built-in atom {a.pred}{names}")
            return order[key]
        if len(names) == 1:
            return (ci if names[0] == "x" else cj).value(a.pred)
        if names[0] == names[1]:
            return (ci if names[0] == "x" else cj).value(a.pred)
        return None

    both = And(pf.matrix, rename(pf.matrix, {"x": "y", "y": "x"}))
    simplified = _simplify(both, lookup)
    atoms = tuple((b, d) for b in binaries for d in ("xy", "yx"))
    table = []
    for bits in itertools.product((False, True), repeat=len(atoms)):
        assignment = {}
        for (pred, d), v in zip(atoms, bits):
            args = (Var("x"), Var("y")) if d == "xy" else (Var("y"), Var("x"))
            assignment[Atom(pred, args)] = v
        table.append(_evaluate(simplified, assignment))
    return ConditionedPair(i, j, simplified, atoms, tuple(table))
