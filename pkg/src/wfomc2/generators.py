"""Instance generators for the benchmark families.

Every generator builds the instance as text and parses it, so its output is
guaranteed to round-trip through the input format.
"""
from __future__ import annotations

import math

from .parser import parse_sentence
from .syntax import SentenceSpec, SpecError


def _spec(lines: list) -> SentenceSpec:
    return parse_sentence("\n".join(lines) + "\n")


def _sentence(parts: list) -> str:
    return " &\n  ".join(f"({p})" for p in parts)


# -- small-world graphs ------------------------------------------------------

def ws_count(n: int, m: int) -> int:
    """Fixed-order count of the cycle-plus-m-chords instance (chords are free pairs)."""
    if n < 3:
        raise ValueError("n >= 3 required")
    return math.comb(n * (n - 1) // 2 - n, m)


def gen_ws(n: int, m: int, legacy: bool = False) -> SentenceSpec:
    """Undirected loop-free graph containing the n-cycle plus exactly m chords."""
    if n < 3:
        raise SpecError("gen_ws needs n >= 3")
    if not 0 <= m <= n * (n - 3) // 2:
        raise SpecError(f"m must lie in 0..{n * (n - 3) // 2} for n={n}")
    bound = f"|E| = 2*n + {2 * m}"
    if not legacy:
        return _spec([
            "predicates: E/2",
            "sentence: " + _sentence([
                "forall x: ~E(x,x)",
                "forall x forall y: E(x,y) -> E(y,x)",
                "forall x forall y: cirpred(x,y) -> E(x,y)",
            ]),
            "axiom: linear(leq, cirpred)",
            f"cardinality: {bound}",
            f"domain: {n}",
        ])
    return _spec([
        "predicates: E/2, Perm/2, Pred/2",
        "sentence: " + _sentence([
            "forall x: ~Perm(x,x) & ~E(x,x)",
            "forall x exists y: Perm(x,y)",
            "forall y exists x: Perm(x,y)",
            "forall x forall y: Pred(x,y) -> Perm(x,y)",
            "forall x forall y: Pred(x,y) -> leq(x,y)",
            "forall x forall y: Perm(x,y) -> E(x,y)",
            "forall x forall y: E(x,y) -> E(y,x)",
        ]),
        "axiom: linear(leq)",
        "cardinality: |Perm| = n, |Pred| = n - 1, " + bound,
        f"domain: {n}",
    ])


# -- grids -------------------------------------------------------------------

INDEPENDENT_SET = "forall x forall y: (V(x,y) | H(x,y)) -> ~(I(x) & I(y))"


def gen_grid(rows: int, cols: int, payload: str = None, payload_preds: str = "") -> SentenceSpec:
    """A rows x cols grid laid out column by column over a linear order.

    ``V`` links vertically adjacent elements through ``pred1`` and ``H`` links
    horizontally adjacent ones through ``pred<rows>``.  ``payload`` is a formula
    over ``V``/``H``; ``"independent-set"`` selects a built-in one with ``I/1``.
    """
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise SpecError("grid needs rows, cols >= 1 and at least two cells")
    k = rows
    pk = f"pred{k}"
    parts = [
        "forall x: First(x) <-> (forall y: leq(x,y))",
        "forall x: Last(x) <-> (forall y: leq(y,x))",
        "forall x: First(x) -> Bottom(x)",
        f"forall x forall y: Bottom(x) & {pk}(x,y) -> Bottom(y)",
        "forall x: Last(x) -> Top(x)",
        f"forall x forall y: Top(x) & {pk}(y,x) -> Top(y)",
        "forall x forall y: V(x,y) <-> (~Top(x) & ~Bottom(y) & pred1(x,y))",
        "forall x: First(x) -> Left(x)",
        "forall x forall y: Left(x) & V(x,y) -> Left(y)",
        "forall x: Last(x) -> Right(x)",
        "forall x forall y: Right(x) & V(y,x) -> Right(y)",
        f"forall x forall y: H(x,y) <-> (~Left(y) & ~Right(x) & {pk}(x,y))",
    ]
    preds = "First/1, Last/1, Top/1, Bottom/1, Left/1, Right/1, V/2, H/2"
    if payload == "independent-set":
        payload, payload_preds = INDEPENDENT_SET, "I/1"
    if payload:
        parts.append(payload)
    if payload_preds:
        preds += ", " + payload_preds
    orders = sorted({1, k})
    return _spec([
        f"predicates: {preds}",
        "sentence: " + _sentence(parts),
        "axiom: linear(leq, " + ", ".join(f"pred{s}" for s in orders) + ")",
        f"cardinality: |Top| = {cols}, |Bottom| = {cols}, |Left| = {k}, |Right| = {k}",
        f"domain: {rows * cols}",
    ])


def grid_independent_sets(rows: int, cols: int) -> int:
    """Independent sets of the rows x cols grid graph, by subset enumeration."""
    cells = [(r, c) for c in range(cols) for r in range(rows)]
    idx = {rc: i for i, rc in enumerate(cells)}
    edges = []
    for (r, c), i in idx.items():
        if r + 1 < rows:
            edges.append((i, idx[(r + 1, c)]))
        if c + 1 < cols:
            edges.append((i, idx[(r, c + 1)]))
    return sum(1 for mask in range(1 << len(cells))
               if not any(mask >> a & 1 and mask >> b & 1 for a, b in edges))


# -- hidden Markov weather model ---------------------------------------------

_AUX_WEIGHTS = ("0.5", "1.0", "0.4", "0.1")


def gen_weather(variant: str = "weather", n: int = 4) -> SentenceSpec:
    """Markov-logic weather model; ``weather`` uses pred1..pred3, ``weather2`` only pred1."""
    if variant not in ("weather", "weather2"):
        raise SpecError(f"unknown weather variant {variant!r}")
    k = 3 if variant == "weather" else 1
    aux = [f"Aux_{i}/1 weight exp({_AUX_WEIGHTS[i]}) 1" for i in range(k + 1)]
    parts = [
        "forall x: ~(Rn(x) & Sn(x)) & (Rn(x) | Sn(x))",
        "forall x forall y: Aux_0(x) <-> (S(x) -> Rn(x))",
        "forall x forall y: pred1(x,y) & Sn(x) -> Rn(x)",
    ]
    parts += [f"forall x forall y: Aux_{s}(x) <-> (pred{s}(x,y) & S(x) -> S(y))"
              for s in range(1, k + 1)]
    return _spec([
        "predicates: Rn/1, Sn/1, S/1, " + ", ".join(aux),
        "sentence: " + _sentence(parts),
        "axiom: linear(leq, " + ", ".join(f"pred{s}" for s in range(1, k + 1)) + ")",
        f"domain: {n}",
        "options: ring=float",
    ])


# -- identity chain ----------------------------------------------------------

def gen_chain(n: int) -> SentenceSpec:
    """Neighbours agree on A; fixed-order count 2^n + 1 with w(A) = 2."""
    return _spec([
        "predicates: A/1 weight 2 1",
        "sentence: forall x forall y: pred1(x,y) -> (A(x) <-> A(y))",
        "axiom: linear(leq, pred1)",
        f"domain: {n}",
    ])


GENERATORS = {"ws", "grid", "weather", "chain"}
