"""Coefficient rings: exact rationals, floats and truncated polynomials.

Ring elements are plain Python numbers (``int``, ``Fraction``, ``float``) or
:class:`Poly` instances, so the dynamic programs can use ``+`` and ``*``
directly regardless of the instance in use.
"""
from __future__ import annotations

import math
import operator
from fractions import Fraction
from typing import Optional, Sequence

from .syntax import CardinalityConstraint, SpecError, WeightLiteral

_SCALARS = (int, Fraction, float)
_SCALAR_TYPES = frozenset({int, Fraction, float, bool})


def _tidy(c):
    """Collapse integral fractions to ``int``."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class Ring:
    name = "abstract"
    exact = True
    zero = 0
    one = 1

    def lift(self, lit: WeightLiteral):
        raise NotImplementedError

    def from_int(self, k: int):
        return k

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        return a ** k if k else self.one

    def eq(self, a, b) -> bool:
        return a == b

    def render(self, a) -> str:
        return str(a)


class RationalRing(Ring):
    name = "rational"

    def lift(self, lit: WeightLiteral):
        if lit.kind == "exp":
            raise SpecError(f"weight {lit} needs ring=float")
        return _tidy(lit.value)

    def render(self, a) -> str:
        return str(_tidy(a) if isinstance(a, Fraction) else a)


class FloatRing(Ring):
    name = "float"
    exact = False
    zero = 0.0
    one = 1.0

    def lift(self, lit: WeightLiteral):
        if lit.kind == "exp":
            return math.exp(float(lit.text))
        return float(lit.value)

    def from_int(self, k: int):
        return float(k)

    def eq(self, a, b) -> bool:
        return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-300)

    def render(self, a) -> str:
        return repr(float(a))


def lift_weight(lit: WeightLiteral, mode: str = "rational"):
    """Exact value in rational mode, nearest double in float mode."""
    return ring_for(mode).lift(lit)


def ring_for(mode: str) -> Ring:
    if mode == "rational":
        return RationalRing()
    if mode == "float":
        return FloatRing()
    raise SpecError(f"unknown ring {mode!r}")


# -- polynomials -------------------------------------------------------------

class PolyContext:
    """Indeterminates plus the truncation policy shared by all polynomials of a run.

    ``drop[i]``: exponents above this value are discarded (sound when every
    constraint on variable i bounds it from above).  ``sat[i]``: exponents are
    clamped to this value (sound when the only constraints are lower bounds).
    ``limit[i]``: the number of ground atoms; exceeding it is a bug.
    """

    def __init__(self, variables: Sequence[str], limit=None, drop=None, sat=None):
        self.variables = tuple(variables)
        k = len(self.variables)
        self.limit = tuple(limit) if limit is not None else (None,) * k
        self.drop = tuple(drop) if drop is not None else (None,) * k
        self.sat = tuple(sat) if sat is not None else (None,) * k
        self.zero_exp = (0,) * k
        self.active = any(v is not None for v in self.limit + self.drop + self.sat)
        # per-variable (index, limit, drop, sat) for the variables with any policy
        self._checks = tuple((i, self.limit[i], self.drop[i], self.sat[i]) for i in range(k)
                             if (self.limit[i], self.drop[i], self.sat[i]) != (None,) * 3)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def fix(self, e: tuple) -> Optional[tuple]:
        """Apply the truncation policy to an exponent vector; None means drop."""
        out = None
        for i, lim, d, sat in self._checks:
            v = e[i]
            if lim is not None and v > lim:
                raise ArithmeticError(
                    f"exponent of {self.variables[i]} exceeds its ground-atom count {lim}")
            if d is not None and v > d:
                return None
            if sat is not None and v > sat:
                if out is None:
                    out = list(e)
                out[i] = sat
        return e if out is None else tuple(out)

    def const(self, c) -> "Poly":
        return Poly({self.zero_exp: c}, self) if c else Poly({}, self)

    def var(self, name: str, power: int = 1) -> "Poly":
        e = [0] * len(self.variables)
        e[self.index(name)] = power
        e = self.fix(tuple(e))
        return Poly({} if e is None else {e: 1}, self)

    @classmethod
    def for_constraints(cls, variables, constraints, n: int, atom_counts: dict,
                        truncate: bool = True) -> "PolyContext":
        limit, drop, sat = [], [], []
        for v in variables:
            # pair tables mention two atoms even when a run never uses them
            limit.append(max(atom_counts[v], 2))
            cs = [c for c in constraints if c.pred == v]
            uppers = [c.resolve(n) for c in cs if c.op in ("=", "<=")]
            lowers = [c.resolve(n) for c in cs if c.op == ">="]
            if not truncate:
                drop.append(None)
                sat.append(None)
            elif uppers:
                drop.append(max(uppers))
                sat.append(None)
            else:
                drop.append(None)
                sat.append(max(lowers) if lowers else None)
        return cls(variables, limit, drop, sat)


class Poly:
    """Sparse polynomial ``{exponent tuple: coefficient}`` with no zero coefficients."""

    __slots__ = ("terms", "ctx")

    def __init__(self, terms: dict, ctx: PolyContext):
        self.terms = terms
        self.ctx = ctx

    # construction helpers
    def _new(self, terms: dict) -> "Poly":
        return Poly(terms, self.ctx)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, _SCALARS):
            return self.ctx.const(other)
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other):
        if type(other) is not Poly:
            if type(other) not in _SCALAR_TYPES:
                return NotImplemented
            if not other:
                return self
            other = self.ctx.const(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = _tidy(v + c)
                if v:
                    out[e] = v
                else:
                    del out[e]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _scale(self, c):
        if not c:
            return self._new({})
        if c == 1:
            return self
        return self._new({e: _tidy(v * c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if type(other) is not Poly:
            if type(other) in _SCALAR_TYPES:
                return self._scale(other)
            return NotImplemented
        big, small = (self, other) if len(self.terms) >= len(other.terms) else (other, self)
        a, b = big.terms, small.terms
        if not b:
            return self._new({})
        zero = self.ctx.zero_exp
        if len(b) == 1:
            ((eb, cb),) = b.items()
            if eb == zero:
                return big._scale(cb)
        fix = self.ctx.fix
        active = self.ctx.active
        out = {}
        add = operator.add
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                if active:
                    e = fix(e)
                    if e is None:
                        continue
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return self._new({e: _tidy(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ctx.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = self.ctx.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if len(self.terms) == 1 and self.ctx.zero_exp in self.terms:
            return hash(self.terms[self.ctx.zero_exp])
        if not self.terms:
            return hash(0)
        return hash(frozenset(self.terms.items()))

    def coefficient(self, exponents: tuple):
        return self.terms.get(tuple(exponents), 0)

    def evaluate(self, values: Sequence):
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                term = term * v ** k
            total = total + term
        return _tidy(total) if not isinstance(total, float) else total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{k}" if k > 1 else v
                            for v, k in zip(self.ctx.variables, e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


class PolyRing(Ring):
    """Polynomials over a scalar ring, one indeterminate per constrained predicate."""

    def __init__(self, base: Ring, ctx: PolyContext):
        self.base = base
        self.ctx = ctx
        self.name = f"poly[{base.name}]"
        self.exact = base.exact
        self.zero = ctx.const(0)
        self.one = ctx.const(base.one)

    def lift(self, lit: WeightLiteral):
        return self.base.lift(lit)

    def var(self, name: str):
        return self.ctx.var(name)

    def render(self, a) -> str:
        return repr(a)


def extract_cardinality(p, constraints: Sequence[CardinalityConstraint], n: int,
                        variables: Sequence[str] = (), fixed_counts: Optional[dict] = None):
    """Sum the coefficients whose exponent vector satisfies every constraint.

    ``variables`` names the indeterminates of ``p`` in order; constraints on
    predicates listed in ``fixed_counts`` (built-ins) are checked against those
    counts instead.
    """
    fixed_counts = fixed_counts or {}
    variables = tuple(variables)
    checks = []
    for c in constraints:
        if c.pred in variables:
            checks.append((variables.index(c.pred), c))
        elif c.pred in fixed_counts:
            if not c.holds(fixed_counts[c.pred], n):
                return 0.0 if _is_float(p) else 0
        else:
            raise SpecError(f"cardinality constraint on {c.pred!r} has no indeterminate")
    if not isinstance(p, Poly):
        if variables:
            p_terms = {(0,) * len(variables): p}
        else:
            return p
    else:
        p_terms = p.terms
    total = 0
    for e, coeff in p_terms.items():
        if all(c.holds(e[i], n) for i, c in checks):
            total = total + coeff
    return _tidy(total) if isinstance(total, Fraction) else total


def _is_float(p) -> bool:
    if isinstance(p, float):
        return True
    if isinstance(p, Poly):
        return any(isinstance(c, float) for c in p.terms.values())
    return False
