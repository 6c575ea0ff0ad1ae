"""Random small FO2 sentences for differential testing against the oracle."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .parser import parse_sentence
from .syntax import SentenceSpec

AXIOMS = {
    "none": None,
    "linear": "linear(leq)",
    "pred1": "linear(leq, pred1)",
    "pred12": "linear(leq, pred1, pred2)",
    "cirpred": "linear(leq, cirpred)",
}
WEIGHTS = ["1", "1", "2", "1/2", "3", "-1", "2/3", "0"]
UNARY = ["A", "B"]
BINARY = ["R", "S"]


@dataclass
class RandomInstance:
    text: str
    spec: SentenceSpec
    n: int
    axiom: str
    free_atoms: int


def _atom_pool(unary, binary, axiom: str):
    pool = []
    for u in unary:
        pool += [f"{u}(x)", f"{u}(y)"]
    for b in binary:
        pool += [f"{b}(x,y)", f"{b}(y,x)", f"{b}(x,x)", f"{b}(y,y)"]
    if axiom != "none":
        pool += ["leq(x,y)", "leq(y,x)"]
    if axiom in ("pred1", "pred12"):
        pool += ["pred1(x,y)", "pred1(y,x)"]
    if axiom == "pred12":
        pool += ["pred2(x,y)"]
    if axiom == "cirpred":
        pool += ["cirpred(x,y)", "cirpred(y,x)"]
    return pool


def _formula(rng: random.Random, pool, depth: int) -> str:
    if depth == 0 or rng.random() < 0.3:
        a = rng.choice(pool)
        return ("~" + a) if rng.random() < 0.4 else a
    op = rng.choice(["&", "|", "->", "<->", "|"])
    left = _formula(rng, pool, depth - 1)
    right = _formula(rng, pool, depth - 1)
    return f"({left} {op} {right})"


def random_instance(rng: random.Random, max_free_atoms: int = 20,
                    n_range=(1, 5), axioms=None) -> RandomInstance:
    """One random spec; ``axioms`` restricts the keys of ``AXIOMS`` drawn from."""
    axiom = rng.choice(list(axioms or AXIOMS))
    while True:
        nu = rng.randint(0, 2)
        nb = rng.randint(0, 2)
        if nu + nb == 0:
            continue
        lo = 2 if axiom == "cirpred" else n_range[0]
        ns = [n for n in range(lo, n_range[1] + 1) if nu * n + nb * n * n <= max_free_atoms]
        if ns:
            n = rng.choice(ns)
            break
    unary, binary = UNARY[:nu], BINARY[:nb]
    preds = [(u, 1) for u in unary] + [(b, 2) for b in binary]
    decl = ", ".join(f"{p}/{a} weight {rng.choice(WEIGHTS[:-1])} {rng.choice(WEIGHTS)}"
                     for p, a in preds)
    pool = _atom_pool(unary, binary, axiom)
    sentence = f"forall x forall y: {_formula(rng, pool, 3)}"
    if rng.random() < 0.2:
        sentence = f"({sentence}) & (forall x exists y: {_formula(rng, pool, 2)})"
    lines = [f"predicates: {decl}", f"sentence: {sentence}"]
    if AXIOMS[axiom]:
        lines.append(f"axiom: {AXIOMS[axiom]}")
    if rng.random() < 0.3:
        p, a = rng.choice(preds)
        op = rng.choice(["=", "<=", ">="])
        lines.append(f"cardinality: |{p}| {op} {rng.randint(0, n ** a)}")
    lines.append(f"domain: {n}")
    text = "\n".join(lines) + "\n"
    return RandomInstance(text, parse_sentence(text), n, axiom, nu * n + nb * n * n)


def random_instances(seed: int, count: int, **kwargs) -> list:
    rng = random.Random(seed)
    return [random_instance(rng, **kwargs) for _ in range(count)]
