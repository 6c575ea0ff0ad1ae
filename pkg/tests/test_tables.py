"""Weight tables checked against a per-pair enumeration of binary atom assignments."""
import csv
import itertools

import numpy as np
import pytest

from wfomc2 import parse_sentence
from wfomc2.normalize import condition_pair, enumerate_cells, pairwise_form
from wfomc2.ring import ring_for
from wfomc2.tables import build_tables, cell_matrix, dump_tables

HEAD = "predicates: A/1 weight 1/2 3, B/1 weight 2 1, R/2 weight 2 1/3, S/2 weight 3/5 1\n"

SPECS = {
    "plain": HEAD + "sentence: forall x forall y: (R(x,y) -> (A(x) | S(y,x))) & (B(x) -> ~R(x,x))\n",
    "linear": HEAD + ("sentence: forall x forall y: (leq(x,y) & R(x,y) -> A(y)) & (S(x,y) -> B(x))\n"
                      "axiom: linear(leq)\n"),
    "pred2": HEAD + ("sentence: forall x forall y: (pred2(x,y) -> (R(x,y) <-> A(y))) & "
                     "(leq(x,y) -> (S(y,x) -> B(y)))\naxiom: linear(leq, pred2)\n"),
    "cyclic": HEAD + ("sentence: forall x forall y: (cirpred(x,y) -> (R(x,y) | ~A(y))) & "
                      "(S(x,y) & leq(y,x) -> A(x))\naxiom: linear(leq, cirpred)\n"),
}


def _orders(builtins, pred_true=None, cyc=(False, False)):
    """Built-in truth values for x = new, y = old with old before new."""
    out = {}
    for name, kind, order in builtins:
        for pat in ("xy", "yx", "xx", "yy"):
            if kind == "order":
                v = pat != "xy"
            elif kind == "pred":
                v = pat == "yx" and order == pred_true
            else:
                fwd, back = cyc
                v = (pat == "yx" and fwd) or (pat == "xy" and back)
            out[(name, pat)] = v
    return out


def _pair_weight(pf, cells, i, j, order, weights):
    cp = condition_pair(pf, i, j, cells, order)
    total = 0
    for bits in itertools.product((False, True), repeat=len(cp.atoms)):
        assignment = dict(zip(cp.atoms, bits))
        if cp.satisfied(assignment):
            term = 1
            for (pred, _), v in assignment.items():
                term *= weights[pred][v]
            total += term
    return total


@pytest.mark.parametrize("name", sorted(SPECS))
def test_tables_match_pair_enumeration(name):
    spec = parse_sentence(SPECS[name] + "domain: 3\n")
    pf = pairwise_form(spec)
    ring = ring_for("rational")
    tabs = build_tables(pf, ring)
    cells = enumerate_cells(pf)
    weights = {p.name: {True: ring.lift(p.weight_pos), False: ring.lift(p.weight_neg)}
               for p in pf.ordinary}
    builtins = [(p.name, p.kind, p.order) for p in pf.vocabulary if p.builtin]
    idx = [c.index for c in tabs.cells]

    # cell weights: product of literal weights
    for c, w in zip(tabs.cells, tabs.w):
        expect = 1
        for a, v in zip(c.atoms, c.values):
            expect *= weights[a][v]
        assert w == expect

    mats = [(tabs.r, _orders(builtins))]
    if tabs.cyclic:
        mats += [(tabs.r_tilde[0], _orders(builtins, cyc=(True, False))),
                 (tabs.r_wrap, _orders(builtins, cyc=(False, True))),
                 (tabs.r_both, _orders(builtins, cyc=(True, True)))]
    else:
        mats += [(m, _orders(builtins, pred_true=s + 1)) for s, m in enumerate(tabs.r_tilde)]
    for m, order in mats:
        for l, a in enumerate(idx):
            for t, b in enumerate(idx):
                assert m[l][t] == _pair_weight(pf, cells, a, b, order or None, weights), (l, t)


def test_dead_cells_are_pruned():
    spec = parse_sentence("predicates: A/1, B/1\nsentence: forall x: A(x) -> B(x)\ndomain: 2\n")
    tabs = build_tables(pairwise_form(spec), ring_for("rational"))
    assert (tabs.p, tabs.total_cells) == (3, 4)
    assert all(c.value("B") or not c.value("A") for c in tabs.cells)


def test_cell_matrix_order():
    cm = cell_matrix(2)
    assert cm.tolist() == [[True, True], [True, False], [False, True], [False, False]]
    assert np.array_equal(cell_matrix(0), np.ones((1, 0), dtype=bool))


def test_dump_tables(tmp_path):
    spec = parse_sentence(SPECS["pred2"] + "domain: 3\n")
    tabs = build_tables(pairwise_form(spec), ring_for("rational"))
    out = tmp_path / "t.csv"
    dump_tables(tabs, out)
    rows = list(csv.DictReader(out.open()))
    kinds = {r["table"] for r in rows}
    assert kinds == {"w_hat", "r_hat", "r_tilde"}
    assert sum(r["table"] == "w_hat" for r in rows) == tabs.p
    assert sum(r["table"] == "r_tilde" for r in rows) == 2 * tabs.p ** 2
