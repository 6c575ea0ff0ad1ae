"""Text format for problem instances: parser and printer.

A file is a sequence of sections introduced by a header keyword and a colon::

    predicates:
      sm/1 weight 2 1
      fr/2
    sentence:
      forall x forall y: sm(x) & fr(x,y) -> sm(y)
    axiom: linear(leq, pred1)
    cardinality: |fr| <= 2*n + 1
    evidence: sm(1), ~sm(2)
    domain: 4
    options: ring=rational, fixed_order=false

Operator precedence from tightest to loosest: ``~``, ``&``, ``|``, ``->``
(right associative), ``<->`` (left associative).  A quantifier body extends
as far to the right as possible.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .syntax import (
    BINARY, QUANTIFIERS, And, Atom, Axiom, CardinalityConstraint, Const, Exists,
    Forall, Formula, Iff, Implies, Literal, Not, Options, Or, ParseError,
    Predicate, SentenceSpec, Truth, Var, VARIABLES, WeightLiteral, atoms_of,
    builtin_predicates, free_vars, subformulas,
)

SECTIONS = ("predicates", "sentence", "axiom", "cardinality", "evidence", "domain", "options")
_HEADER = re.compile(r"^\s*(" + "|".join(SECTIONS) + r")\s*:", re.IGNORECASE)
_RESERVED = re.compile(r"^(pred\d+|cirpred)$")

_KEYWORDS = {
    "forall": "FORALL", "exists": "EXISTS",
    "and": "AND", "or": "OR", "not": "NOT",
    "implies": "IMPLIES", "iff": "IFF",
    "true": "TRUE", "false": "FALSE",
}

_SYMBOLS = [
    ("<->", "IFF"), ("<=>", "IFF"), ("->", "IMPLIES"), ("=>", "IMPLIES"),
    ("<=", "LE"), (">=", "GE"),
    ("&", "AND"), ("|", "OR"), ("~", "NOT"), ("!", "NOT"),
    ("(", "LPAREN"), (")", "RPAREN"), (",", "COMMA"), (":", "COLON"),
    ("=", "EQ"), ("/", "SLASH"), ("*", "STAR"), ("+", "PLUS"), ("-", "MINUS"),
    ("∀", "FORALL"), ("∃", "EXISTS"), ("¬", "NOT"), ("∧", "AND"), ("∨", "OR"),
    ("⇒", "IMPLIES"), ("→", "IMPLIES"), ("⇔", "IFF"), ("↔", "IFF"),
    ("≤", "LE"), ("≥", "GE"),
]

_NUMBER = re.compile(r"\d+(\.\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 1) -> list:
    """Split ``text`` into tokens; ``line``/``col`` give the position of its first char."""
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            kind = "DECIMAL" if m.group(1) else "INT"
            tokens.append(Token(kind, m.group(0), line, col))
        else:
            m = _IDENT.match(text, i)
            if m:
                word = m.group(0)
                tokens.append(Token(_KEYWORDS.get(word.lower(), "IDENT"), word, line, col))
            else:
                for sym, kind in _SYMBOLS:
                    if text.startswith(sym, i):
                        tokens.append(Token(kind, sym, line, col))
                        break
                else:
                    raise ParseError(f"unexpected character {ch!r}", line, col)
                i += len(tokens[-1].text)
                col += len(tokens[-1].text)
                continue
        i += len(m.group(0))
        col += len(m.group(0))
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Stream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def accept(self, kind: str) -> Optional[Token]:
        if self.peek.kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str = "") -> Token:
        tok = self.peek
        if tok.kind != kind:
            found = repr(tok.text) if tok.text else "end of input"
            raise ParseError(f"expected {what or kind.lower()}, found {found}", tok.line, tok.col)
        return self.next()

    def fail(self, message: str):
        tok = self.peek
        raise ParseError(message, tok.line, tok.col)


# -- formulas ----------------------------------------------------------------

class _FormulaParser:
    def __init__(self, stream: _Stream):
        self.s = stream
        # (token, variable, body) for every exists=1 seen
        self.exactly_one: list = []
        self.positions: dict = {}

    def parse(self) -> Formula:
        f = self.iff()
        return f

    def iff(self) -> Formula:
        left = self.implies()
        while self.s.accept("IFF"):
            left = Iff(left, self.implies())
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.s.accept("IMPLIES"):
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.s.accept("OR"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.s.accept("AND"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.s.peek
        if self.s.accept("NOT"):
            return Not(self.unary())
        if tok.kind in ("FORALL", "EXISTS"):
            return self.quantified()
        if self.s.accept("LPAREN"):
            f = self.iff()
            self.s.expect("RPAREN", "')'")
            return f
        if self.s.accept("TRUE"):
            return Truth(True)
        if self.s.accept("FALSE"):
            return Truth(False)
        if tok.kind == "IDENT":
            return self.atom()
        self.s.fail(f"expected a formula, found {tok.text!r}" if tok.text else
                    "expected a formula, found end of input")

    def variable(self) -> str:
        tok = self.s.expect("IDENT", "a variable")
        if tok.text not in VARIABLES:
            raise ParseError(f"only the variables x and y are allowed, found {tok.text!r}",
                             tok.line, tok.col)
        return tok.text

    def quantified(self) -> Formula:
        tok = self.s.next()
        counting = False
        if tok.kind == "EXISTS" and self.s.accept("EQ"):
            k = self.s.expect("INT", "a count after 'exists='")
            if k.text != "1":
                raise ParseError("only the counting quantifier exists=1 is supported",
                                 k.line, k.col)
            counting = True
        var = self.variable()
        self.s.accept("COLON")
        body = self.iff()
        if counting:
            self.exactly_one.append((tok, var, body))
            return _ExactlyOne(var, body, tok.line, tok.col)
        return (Forall if tok.kind == "FORALL" else Exists)(var, body)

    def atom(self) -> Formula:
        name = self.s.next()
        self.s.expect("LPAREN", f"'(' after {name.text!r}")
        args = [self.term()]
        while self.s.accept("COMMA"):
            args.append(self.term())
        self.s.expect("RPAREN", "')'")
        a = Atom(name.text, tuple(args))
        self.positions.setdefault(a.pred, (name.line, name.col))
        return a

    def term(self):
        tok = self.s.peek
        if tok.kind == "INT":
            self.s.next()
            value = int(tok.text)
            if value < 1:
                raise ParseError("constants are positive integers", tok.line, tok.col)
            return Const(value)
        if tok.kind == "IDENT":
            return Var(self.variable())
        self.s.fail(f"expected a variable or constant, found {tok.text!r}")


@dataclass(frozen=True)
class _ExactlyOne(Formula):
    """Placeholder produced while parsing ``exists=1``; rewritten before return."""

    var: str
    body: Formula
    line: int
    col: int


def _desugar_exactly_one(f: Formula, extra: list) -> Formula:
    """Rewrite ``forall v exists=1 u: P(..)`` into ``forall v exists u: P(..)`` plus |P| = n."""
    if isinstance(f, Forall) and isinstance(f.body, _ExactlyOne):
        inner = f.body
        body = inner.body
        ok = (isinstance(body, Atom) and len(body.args) == 2 and inner.var != f.var
              and all(isinstance(t, Var) for t in body.args)
              and {t.name for t in body.args} == {f.var, inner.var})
        if not ok:
            raise ParseError("exists=1 is only supported as 'forall x exists=1 y: P(x,y)' "
                             "(or with P(y,x))", inner.line, inner.col)
        extra.append(CardinalityConstraint(body.pred, "=", 0, per_n=1))
        return Forall(f.var, Exists(inner.var, body))
    if isinstance(f, _ExactlyOne):
        raise ParseError("exists=1 must directly follow a universal quantifier", f.line, f.col)
    if isinstance(f, Not):
        return Not(_desugar_exactly_one(f.arg, extra))
    if isinstance(f, BINARY):
        return type(f)(_desugar_exactly_one(f.left, extra), _desugar_exactly_one(f.right, extra))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, _desugar_exactly_one(f.body, extra))
    return f


def parse_formula(text: str, line: int = 1, col: int = 1) -> Formula:
    """Parse a bare formula (no vocabulary checks)."""
    stream = _Stream(tokenize(text, line, col))
    fp = _FormulaParser(stream)
    f = fp.parse()
    if stream.peek.kind != "EOF":
        stream.fail(f"unexpected {stream.peek.text!r} after formula")
    if fp.exactly_one:
        raise ParseError("exists=1 needs the surrounding sentence", line, col)
    return f


# -- sections ----------------------------------------------------------------

def _split_sections(text: str) -> list:
    """Return (name, content, line, col) per section, in file order."""
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0]
        m = _HEADER.match(stripped)
        if m:
            name = m.group(1).lower()
            start = m.end()
            current = [name, [raw[start:]], lineno, start + 1]
            sections.append(current)
        elif current is not None:
            current[1].append(raw)
        elif stripped.strip():
            raise ParseError("content before the first section header", lineno, 1)
    return [(name, "\n".join(lines), line, col) for name, lines, line, col in sections]


def _parse_weight(stream: _Stream) -> WeightLiteral:
    negative = bool(stream.accept("MINUS"))
    tok = stream.peek
    if tok.kind == "IDENT" and tok.text.lower() == "exp":
        stream.next()
        stream.expect("LPAREN", "'(' after exp")
        sign = "-" if stream.accept("MINUS") else ""
        num = stream.next()
        if num.kind not in ("INT", "DECIMAL"):
            raise ParseError("exp() takes a decimal number", num.line, num.col)
        stream.expect("RPAREN", "')'")
        if negative:
            raise ParseError("negated exp() weights are not supported", tok.line, tok.col)
        return WeightLiteral.exp(sign + num.text)
    if tok.kind == "DECIMAL":
        stream.next()
        return WeightLiteral.decimal(("-" if negative else "") + tok.text)
    if tok.kind == "INT":
        stream.next()
        num = int(tok.text)
        den = 1
        if stream.accept("SLASH"):
            d = stream.expect("INT", "a denominator")
            den = int(d.text)
            if den == 0:
                raise ParseError("weight denominator must be non-zero", d.line, d.col)
        return WeightLiteral.rational(-num if negative else num, den)
    stream.fail("expected a weight (p/q, decimal or exp(..))")


def _parse_predicates(content: str, line: int, col: int) -> list:
    stream = _Stream(tokenize(content, line, col))
    preds = []
    while stream.peek.kind != "EOF":
        name = stream.expect("IDENT", "a predicate name")
        stream.expect("SLASH", "'/' and an arity")
        ar = stream.expect("INT", "an arity")
        arity = int(ar.text)
        if arity not in (1, 2):
            raise ParseError(f"predicate arity must be 1 or 2, got {arity}", ar.line, ar.col)
        wpos = wneg = WeightLiteral.rational(1)
        if stream.peek.kind == "IDENT" and stream.peek.text.lower() == "weight":
            stream.next()
            wpos = _parse_weight(stream)
            wneg = _parse_weight(stream)
        if _RESERVED.match(name.text):
            raise ParseError(f"{name.text!r} is a reserved built-in name", name.line, name.col)
        preds.append((Predicate(name.text, arity, weight_pos=wpos, weight_neg=wneg), name))
        stream.accept("COMMA")
    return preds


def _parse_axiom(content: str, line: int, col: int) -> Axiom:
    stream = _Stream(tokenize(content, line, col))
    head = stream.expect("IDENT", "'linear'")
    if head.text != "linear":
        raise ParseError(f"unknown axiom {head.text!r}; expected linear(...)", head.line, head.col)
    stream.expect("LPAREN", "'('")
    order = stream.expect("IDENT", "the order predicate name")
    if _RESERVED.match(order.text):
        raise ParseError("the order predicate name must come first", order.line, order.col)
    preds = []
    cyclic = False
    while stream.accept("COMMA"):
        tok = stream.expect("IDENT", "a predecessor name")
        m = re.fullmatch(r"pred(\d+)", tok.text)
        if m and int(m.group(1)) >= 1:
            s = int(m.group(1))
            if s in preds:
                raise ParseError(f"{tok.text} declared twice", tok.line, tok.col)
            preds.append(s)
        elif tok.text == "cirpred":
            cyclic = True
        else:
            raise ParseError(f"expected predK or cirpred, found {tok.text!r}", tok.line, tok.col)
    stream.expect("RPAREN", "')'")
    if stream.peek.kind != "EOF":
        stream.fail("unexpected text after axiom")
    if cyclic and preds:
        raise ParseError("cyclic and non-cyclic predecessor axioms are mutually exclusive",
                         line, col)
    return Axiom(order.text, tuple(sorted(preds)), cyclic)


def _parse_bound(stream: _Stream):
    """Affine bound ``c``, ``n``, ``k*n``, ``k*n + c``, ``n - c``."""
    per_n = 0
    const = 0
    sign = 1
    while True:
        if stream.accept("MINUS"):
            sign = -sign
        tok = stream.peek
        if tok.kind == "INT":
            stream.next()
            value = int(tok.text)
            if stream.accept("STAR"):
                nt = stream.expect("IDENT", "'n'")
                if nt.text != "n":
                    raise ParseError("bounds may only mention n", nt.line, nt.col)
                per_n += sign * value
            else:
                const += sign * value
        elif tok.kind == "IDENT" and tok.text == "n":
            stream.next()
            per_n += sign
        else:
            stream.fail("expected an integer or n in cardinality bound")
        if stream.accept("PLUS"):
            sign = 1
        elif stream.peek.kind == "MINUS":
            sign = 1
        else:
            break
    return const, per_n


def _parse_cardinalities(content: str, line: int, col: int) -> list:
    stream = _Stream(tokenize(content, line, col))
    out = []
    while stream.peek.kind != "EOF":
        stream.expect("OR", "'|'")
        name = stream.expect("IDENT", "a predicate name")
        stream.expect("OR", "'|'")
        op_tok = stream.next()
        op = {"EQ": "=", "LE": "<=", "GE": ">="}.get(op_tok.kind)
        if op is None:
            raise ParseError("expected =, <= or >=", op_tok.line, op_tok.col)
        const, per_n = _parse_bound(stream)
        out.append((CardinalityConstraint(name.text, op, const, per_n), name))
        stream.accept("COMMA")
        stream.accept("AND")
    return out


def _parse_evidence(content: str, line: int, col: int) -> list:
    stream = _Stream(tokenize(content, line, col))
    out = []
    while stream.peek.kind != "EOF":
        positive = not stream.accept("NOT")
        name = stream.expect("IDENT", "a predicate name")
        stream.expect("LPAREN", "'('")
        idx = stream.expect("INT", "an element position")
        if stream.peek.kind == "COMMA":
            stream.fail("evidence must be unary")
        stream.expect("RPAREN", "')'")
        if int(idx.text) < 1:
            raise ParseError("element positions start at 1", idx.line, idx.col)
        out.append((Literal(name.text, int(idx.text), positive), name, idx))
        stream.accept("COMMA")
    return out


def _parse_options(content: str, line: int, col: int) -> Options:
    stream = _Stream(tokenize(content, line, col))
    ring, fixed = "rational", False
    while stream.peek.kind != "EOF":
        key = stream.expect("IDENT", "an option name")
        stream.expect("EQ", "'='")
        val = stream.next()
        if key.text == "ring":
            if val.text not in ("rational", "float"):
                raise ParseError("ring must be rational or float", val.line, val.col)
            ring = val.text
        elif key.text == "fixed_order":
            if val.kind not in ("TRUE", "FALSE"):
                raise ParseError("fixed_order must be true or false", val.line, val.col)
            fixed = val.kind == "TRUE"
        else:
            raise ParseError(f"unknown option {key.text!r}", key.line, key.col)
        stream.accept("COMMA")
    return Options(ring, fixed)


def parse_sentence(text: str) -> SentenceSpec:
    """Parse a problem instance.  Raises :class:`ParseError` with a location."""
    sections = _split_sections(text)
    seen = {}
    preds, cards, evidence = [], [], []
    formula = None
    axiom = None
    domain = None
    options = Options()
    fparser = None
    for name, content, line, col in sections:
        if name in ("sentence", "axiom", "domain", "options") and name in seen:
            raise ParseError(f"duplicate {name} section", line, 1)
        seen[name] = line
        if name == "predicates":
            preds += _parse_predicates(content, line, col)
        elif name == "sentence":
            stream = _Stream(tokenize(content, line, col))
            fparser = _FormulaParser(stream)
            formula = fparser.parse()
            if stream.peek.kind != "EOF":
                stream.fail(f"unexpected {stream.peek.text!r} after formula")
        elif name == "axiom":
            axiom = _parse_axiom(content, line, col)
        elif name == "cardinality":
            cards += _parse_cardinalities(content, line, col)
        elif name == "evidence":
            evidence += _parse_evidence(content, line, col)
        elif name == "domain":
            stream = _Stream(tokenize(content, line, col))
            tok = stream.expect("INT", "a domain size")
            if stream.peek.kind != "EOF":
                stream.fail("unexpected text after domain size")
            domain = int(tok.text)
        elif name == "options":
            options = _parse_options(content, line, col)
    if formula is None:
        raise ParseError("missing sentence section", 1, 1)

    extra = []
    formula = _desugar_exactly_one(formula, extra)
    cards = [(c, None) for c in extra] + cards

    vocab = {}
    for p, tok in preds:
        if p.name in vocab:
            raise ParseError(f"predicate {p.name!r} declared twice", tok.line, tok.col)
        if axiom is not None and p.name == axiom.order:
            raise ParseError(f"{p.name!r} is the order predicate and cannot be declared",
                             tok.line, tok.col)
        if options.ring != "float" and "exp" in (p.weight_pos.kind, p.weight_neg.kind):
            raise ParseError("exp() weights need ring=float", tok.line, tok.col)
        vocab[p.name] = p
    builtins = {p.name: p for p in builtin_predicates(axiom)}

    def lookup(pred: str, where):
        if pred in vocab:
            return vocab[pred]
        if pred in builtins:
            return builtins[pred]
        line_, col_ = where if where else (None, None)
        if _RESERVED.match(pred) or pred == "leq":
            raise ParseError(f"{pred!r} is not declared by the axiom", line_, col_)
        raise ParseError(f"unknown predicate {pred!r}", line_, col_)

    for a in atoms_of(formula):
        p = lookup(a.pred, fparser.positions.get(a.pred))
        if len(a.args) != p.arity:
            line_, col_ = fparser.positions.get(a.pred, (None, None))
            raise ParseError(f"{a.pred} has arity {p.arity}, used with {len(a.args)} argument(s)",
                             line_, col_)
    if free_vars(formula):
        raise ParseError("sentence has free variables: " + ", ".join(sorted(free_vars(formula))),
                         seen.get("sentence"), None)
    for c, tok in cards:
        if c.pred not in vocab and c.pred not in builtins:
            raise ParseError(f"cardinality on unknown predicate {c.pred!r}",
                             tok.line if tok else None, tok.col if tok else None)
    for lit, tok, idx in evidence:
        p = vocab.get(lit.pred)
        if p is None:
            raise ParseError(f"evidence on unknown or built-in predicate {lit.pred!r}",
                             tok.line, tok.col)
        if p.arity != 1:
            raise ParseError("evidence must be unary", tok.line, tok.col)
        if domain is not None and lit.index > domain:
            raise ParseError(f"position {lit.index} exceeds the domain size {domain}",
                             idx.line, idx.col)
    if domain is not None:
        for g in subformulas(formula):
            if isinstance(g, Atom):
                for t in g.args:
                    if isinstance(t, Const) and t.index > domain:
                        raise ParseError(f"constant {t.index} exceeds the domain size {domain}",
                                         *fparser.positions.get(g.pred, (None, None)))

    return SentenceSpec(
        vocabulary=tuple(vocab.values()) + tuple(builtins.values()),
        formula=formula,
        axiom=axiom,
        cardinalities=tuple(c for c, _ in cards),
        domain_size=domain,
        evidence=tuple(lit for lit, _, _ in evidence),
        options=options,
    )


# -- printing ----------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def format_formula(f: Formula, ctx: int = 0) -> str:
    """Render with the fewest parentheses that reproduce the same tree."""
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.pred}(" + ", ".join(str(t) for t in f.args) + ")"
    if isinstance(f, Not):
        return "~" + format_formula(f.arg, 5)
    if isinstance(f, QUANTIFIERS):
        word = "forall" if isinstance(f, Forall) else "exists"
        text = f"{word} {f.var}: " + format_formula(f.body, 0)
        return f"({text})" if ctx > 0 else text
    prec = _PREC[type(f)]
    if isinstance(f, Implies):
        lp, rp = prec + 1, prec
    else:
        lp, rp = prec, prec + 1
    text = f"{format_formula(f.left, lp)} {_OPS[type(f)]} {format_formula(f.right, rp)}"
    return f"({text})" if prec < ctx else text


def print_sentence(spec: SentenceSpec) -> str:
    lines = ["predicates:"]
    for p in spec.vocabulary:
        if p.builtin:
            continue
        entry = f"  {p.name}/{p.arity}"
        if not (p.weight_pos == WeightLiteral.rational(1) and p.weight_neg == WeightLiteral.rational(1)):
            entry += f" weight {p.weight_pos} {p.weight_neg}"
        lines.append(entry)
    lines.append("sentence:")
    lines.append("  " + format_formula(spec.formula))
    if spec.axiom is not None:
        lines.append(f"axiom: {spec.axiom}")
    for c in spec.cardinalities:
        lines.append(f"cardinality: {c}")
    if spec.evidence:
        lines.append("evidence: " + ", ".join(str(e) for e in spec.evidence))
    if spec.domain_size is not None:
        lines.append(f"domain: {spec.domain_size}")
    lines.append(f"options: ring={spec.options.ring}, "
                 f"fixed_order={'true' if spec.options.fixed_order else 'false'}")
    return "\n".join(lines) + "\n"
