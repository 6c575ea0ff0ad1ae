"""Re-encode native predecessor axioms with ordinary predicates.

These encodings use only the plain linear order (plus pred1 for one of the
cyclic forms) and serve as an independent cross-check of the native
predecessor recurrences, and as the slow baseline in benchmarks.
"""
from __future__ import annotations

from .syntax import (
    ORDINARY, And, Atom, Axiom, CardinalityConstraint, Exists, Forall, Iff, Implies, Not, Or,
    Predicate, SentenceSpec, SpecError, atom, builtin_predicates, conjoin,
)


def _fresh(spec: SentenceSpec, base: str) -> str:
    names = {p.name for p in spec.vocabulary}
    name, i = base, 1
    while name in names:
        name, i = f"{base}{i}", i + 1
    return name


def _substitute(f, mapping: dict):
    """Rename predicates throughout a formula."""
    if isinstance(f, Atom):
        return Atom(mapping.get(f.pred, f.pred), f.args)
    if isinstance(f, Not):
        return Not(_substitute(f.arg, mapping))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_substitute(f.left, mapping), _substitute(f.right, mapping))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _substitute(f.body, mapping))
    return f


def _permutation_scaffold(perm: str, pred: str, order: str) -> tuple:
    """``perm`` is a fixed-point-free permutation whose increasing edges form ``pred``."""
    x, y = "x", "y"
    clauses = [
        Forall(x, Not(atom(perm, x, x))),
        Forall(x, Exists(y, atom(perm, x, y))),
        Forall(y, Exists(x, atom(perm, x, y))),
        Forall(x, Forall(y, Implies(atom(pred, x, y), atom(perm, x, y)))),
        Forall(x, Forall(y, Implies(atom(pred, x, y), atom(order, x, y)))),
    ]
    cards = (CardinalityConstraint(perm, "=", 0, per_n=1),
             CardinalityConstraint(pred, "=", -1, per_n=1))
    return clauses, cards


def _rebuild(spec: SentenceSpec, formula, axiom: Axiom, new_preds: list, cards: tuple,
             rename: dict) -> SentenceSpec:
    ordinary = [p for p in spec.vocabulary if not p.builtin]
    vocab = tuple(ordinary + new_preds + builtin_predicates(axiom))
    old = tuple(CardinalityConstraint(rename.get(c.pred, c.pred), c.op, c.bound, c.per_n)
                for c in spec.cardinalities)
    return spec.replace(vocabulary=vocab, formula=formula, axiom=axiom,
                        cardinalities=old + cards)


def pred1_to_permutation(spec: SentenceSpec) -> SentenceSpec:
    """Replace the native immediate predecessor by a permutation-based encoding.

    Valid for domains of size at least 2 (a single element cannot carry a
    fixed-point-free permutation).
    """
    ax = spec.axiom
    if ax is None or ax.cyclic or ax.preds != (1,):
        raise SpecError("expected an axiom of the form linear(order, pred1)")
    perm, pred = _fresh(spec, "Perm"), _fresh(spec, "Pred1")
    clauses, cards = _permutation_scaffold(perm, pred, ax.order)
    body = _substitute(spec.formula, {"pred1": pred})
    new = [Predicate(perm, 2, ORDINARY), Predicate(pred, 2, ORDINARY)]
    return _rebuild(spec, conjoin([body] + clauses), Axiom(ax.order), new, cards,
                    {"pred1": pred})


def cyclic_to_permutation(spec: SentenceSpec) -> SentenceSpec:
    """Replace the cyclic predecessor by the permutation itself."""
    ax = spec.axiom
    if ax is None or not ax.cyclic:
        raise SpecError("expected a cyclic axiom")
    perm, pred = _fresh(spec, "Perm"), _fresh(spec, "Pred")
    clauses, cards = _permutation_scaffold(perm, pred, ax.order)
    body = _substitute(spec.formula, {"cirpred": perm})
    new = [Predicate(perm, 2, ORDINARY), Predicate(pred, 2, ORDINARY)]
    return _rebuild(spec, conjoin([body] + clauses), Axiom(ax.order), new, cards,
                    {"cirpred": perm})


def cyclic_to_first_last(spec: SentenceSpec) -> SentenceSpec:
    """Define the cyclic predecessor from pred1 plus first/last markers."""
    ax = spec.axiom
    if ax is None or not ax.cyclic:
        raise SpecError("expected a cyclic axiom")
    cir, first, last = _fresh(spec, "CirPred"), _fresh(spec, "First"), _fresh(spec, "Last")
    x, y = "x", "y"
    clauses = [
        Forall(x, Iff(atom(first, x), Forall(y, atom(ax.order, x, y)))),
        Forall(x, Iff(atom(last, x), Forall(y, atom(ax.order, y, x)))),
        Forall(x, Forall(y, Iff(atom(cir, x, y),
                                Or(atom("pred1", x, y), And(atom(last, x), atom(first, y)))))),
    ]
    body = _substitute(spec.formula, {"cirpred": cir})
    new = [Predicate(cir, 2, ORDINARY), Predicate(first, 1, ORDINARY),
           Predicate(last, 1, ORDINARY)]
    return _rebuild(spec, conjoin([body] + clauses), Axiom(ax.order, (1,)), new, (),
                    {"cirpred": cir})


def legacy_encoding(spec: SentenceSpec) -> SentenceSpec:
    """The permutation-based encoding for whichever predecessor the axiom declares."""
    ax = spec.axiom
    if ax is not None and ax.cyclic:
        return cyclic_to_permutation(spec)
    return pred1_to_permutation(spec)

