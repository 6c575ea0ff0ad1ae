"""Abstract syntax for two-variable sentences and problem instances."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

VARIABLES = ("x", "y")

ORDINARY = "ordinary"
ORDER = "order"
PRED = "pred"
CIRPRED = "cirpred"
SKOLEM = "skolem"
AUX = "aux"
BUILTIN_KINDS = (ORDER, PRED, CIRPRED)


class WFOMCError(Exception):
    """Base class for user-facing errors (bad input, unsupported shape)."""


class SpecError(WFOMCError):
    pass


class ParseError(WFOMCError):
    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + message)


# -- weights -----------------------------------------------------------------

@dataclass(frozen=True)
class WeightLiteral:
    """A weight as written in the input: ``3/4``, ``0.25`` or ``exp(0.5)``.

    ``value`` holds the exact rational for the first two forms; ``text`` keeps
    the digits for decimal and exp forms so that printing is lossless.
    """

    kind: str  # "rational" | "decimal" | "exp"
    value: Optional[Fraction] = None
    text: str = ""

    @classmethod
    def rational(cls, numerator: int, denominator: int = 1) -> "WeightLiteral":
        if denominator == 0:
            raise SpecError("weight denominator must be non-zero")
        return cls("rational", Fraction(numerator, denominator))

    @classmethod
    def decimal(cls, text: str) -> "WeightLiteral":
        return cls("decimal", Fraction(text), text)

    @classmethod
    def exp(cls, text: str) -> "WeightLiteral":
        float(text)
        return cls("exp", None, text)

    def __str__(self) -> str:
        if self.kind == "rational":
            return str(self.value)
        if self.kind == "decimal":
            return self.text
        return f"exp({self.text})"


ONE = WeightLiteral.rational(1)
MINUS_ONE = WeightLiteral.rational(-1)


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int
    kind: str = ORDINARY
    weight_pos: WeightLiteral = ONE
    weight_neg: WeightLiteral = ONE
    order: int = 0  # s for the s-th predecessor

    @property
    def builtin(self) -> bool:
        return self.kind in BUILTIN_KINDS


# -- terms and formulas ------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    index: int

    def __str__(self) -> str:
        return str(self.index)


Term = Union[Var, Const]


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Truth(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


TRUE = Truth(True)
FALSE = Truth(False)
BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)


def atom(pred: str, *args) -> Atom:
    return Atom(pred, tuple(Var(a) if isinstance(a, str) else Const(a) for a in args))


def conjoin(formulas) -> Formula:
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TRUE if result is None else result


def disjoin(formulas) -> Formula:
    result = None
    for f in formulas:
        result = f if result is None else Or(result, f)
    return FALSE if result is None else result


def conjuncts(f: Formula) -> Iterator[Formula]:
    if isinstance(f, And):
        yield from conjuncts(f.left)
        yield from conjuncts(f.right)
    else:
        yield f


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.arg)
    elif isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield from subformulas(f.body)


def atoms_of(f: Formula) -> Iterator[Atom]:
    return (g for g in subformulas(f) if isinstance(g, Atom))


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Var))
    if isinstance(f, Truth):
        return frozenset()
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    raise TypeError(f)


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, QUANTIFIERS) for g in subformulas(f))


def rename(f: Formula, mapping: dict) -> Formula:
    """Simultaneously substitute variables in a quantifier-free formula."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(Var(mapping.get(t.name, t.name)) if isinstance(t, Var) else t
                                  for t in f.args))
    if isinstance(f, Truth):
        return f
    if isinstance(f, Not):
        return Not(rename(f.arg, mapping))
    if isinstance(f, BINARY):
        return type(f)(rename(f.left, mapping), rename(f.right, mapping))
    raise TypeError(f"rename expects a quantifier-free formula, got {type(f).__name__}")


# -- problem instance --------------------------------------------------------

@dataclass(frozen=True)
class Axiom:
    """``linear(order, pred1, ..., predk)`` or ``linear(order, cirpred)``."""

    order: str = "leq"
    preds: tuple = ()
    cyclic: bool = False

    @property
    def max_order(self) -> int:
        return max(self.preds, default=0)

    def predicate_names(self) -> list:
        names = [self.order] + [f"pred{s}" for s in self.preds]
        if self.cyclic:
            names.append("cirpred")
        return names

    def __str__(self) -> str:
        return "linear(" + ", ".join(self.predicate_names()) + ")"


@dataclass(frozen=True)
class CardinalityConstraint:
    """``|pred| op bound + per_n * n``."""

    pred: str
    op: str  # "=", "<=", ">="
    bound: int
    per_n: int = 0

    def resolve(self, n: int) -> int:
        return self.bound + self.per_n * n

    def holds(self, count: int, n: int) -> bool:
        b = self.resolve(n)
        if self.op == "=":
            return count == b
        if self.op == "<=":
            return count <= b
        return count >= b

    def bound_text(self) -> str:
        if self.per_n == 0:
            return str(self.bound)
        head = "n" if self.per_n == 1 else ("-n" if self.per_n == -1 else f"{self.per_n}*n")
        if self.bound == 0:
            return head
        sign = "+" if self.bound > 0 else "-"
        return f"{head} {sign} {abs(self.bound)}"

    def __str__(self) -> str:
        return f"|{self.pred}| {self.op} {self.bound_text()}"


@dataclass(frozen=True)
class Literal:
    pred: str
    index: int
    positive: bool = True

    def __str__(self) -> str:
        return ("" if self.positive else "~") + f"{self.pred}({self.index})"


@dataclass(frozen=True)
class Options:
    ring: str = "rational"
    fixed_order: bool = False


@dataclass(frozen=True)
class SentenceSpec:
    vocabulary: tuple
    formula: Formula
    axiom: Optional[Axiom] = None
    cardinalities: tuple = ()
    domain_size: int = 1
    evidence: tuple = ()
    options: Options = field(default_factory=Options)

    def predicate(self, name: str) -> Predicate:
        for p in self.vocabulary:
            if p.name == name:
                return p
        raise SpecError(f"unknown predicate {name!r}")

    def has_predicate(self, name: str) -> bool:
        return any(p.name == name for p in self.vocabulary)

    @property
    def ordinary(self) -> list:
        return [p for p in self.vocabulary if not p.builtin]

    def replace(self, **changes) -> "SentenceSpec":
        return dataclasses.replace(self, **changes)

    def with_domain(self, n: int) -> "SentenceSpec":
        return self.replace(domain_size=n)

    def with_options(self, **changes) -> "SentenceSpec":
        return self.replace(options=dataclasses.replace(self.options, **changes))


def builtin_predicates(axiom: Optional[Axiom]) -> list:
    if axiom is None:
        return []
    preds = [Predicate(axiom.order, 2, ORDER)]
    preds += [Predicate(f"pred{s}", 2, PRED, order=s) for s in axiom.preds]
    if axiom.cyclic:
        preds.append(Predicate("cirpred", 2, CIRPRED, order=1))
    return preds
