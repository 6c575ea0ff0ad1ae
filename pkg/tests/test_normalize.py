import pytest

from wfomc2 import parse_sentence, solve
from wfomc2.normalize import pairwise_form, skolemize, to_nnf
from wfomc2.oracle import oracle_wfomc_full
from wfomc2.parser import parse_formula
from wfomc2.syntax import And, Atom, Exists, Forall, Iff, Implies, Not, Or, SpecError

NESTED = [
    "forall x exists y: R(x,y) & A(y)",
    "forall x: A(x) -> exists y: R(x,y) & ~A(y)",
    "forall x: (exists y: R(x,y)) <-> B(x)",
    "forall x: ~(forall y: R(x,y) | A(y))",
    "forall x forall y: R(x,y) -> (exists x: R(y,x) & B(x))",
    "forall x: (forall y: R(y,x) -> A(y)) | (exists y: R(x,y) & B(y))",
    "A(2) & forall x: A(x) | B(x)",
]


@pytest.mark.parametrize("text", NESTED)
def test_skolemization_preserves_the_count(text):
    spec = parse_sentence(f"predicates: A/1 weight 2 1, B/1 weight 1/3 1, R/2\n"
                          f"sentence: {text}\ndomain: 3\n")
    assert solve(spec).value == oracle_wfomc_full(spec)


@pytest.mark.parametrize("text", NESTED[:4])
def test_skolemization_with_order(text):
    spec = parse_sentence(f"predicates: A/1, B/1 weight 2 1, R/2\n"
                          f"sentence: ({text}) & forall x forall y: pred1(x,y) -> ~(A(x) & A(y))\n"
                          "axiom: linear(leq, pred1)\ndomain: 3\n")
    assert solve(spec).value == oracle_wfomc_full(spec)


def test_pairwise_shape():
    spec = parse_sentence("predicates: A/1, R/2\nsentence: forall x exists y: R(x,y) & A(y)\n")
    sk = skolemize(spec)
    assert isinstance(sk.formula, Forall) and isinstance(sk.formula.body, Forall)
    stack = [sk.formula.body.body]
    while stack:
        f = stack.pop()
        assert not isinstance(f, (Forall, Exists))
        if isinstance(f, Not):
            stack.append(f.arg)
        elif not isinstance(f, Atom) and hasattr(f, "left"):
            stack += [f.left, f.right]
    added = [p for p in sk.vocabulary if p.name not in {"A", "R"}]
    assert added and all(not p.builtin for p in added)
    assert pairwise_form(spec).matrix == sk.formula.body.body


def test_ground_literals_become_evidence():
    spec = parse_sentence("predicates: A/1\nsentence: A(1) & ~A(3) & forall x: A(x) | ~A(x)\n"
                          "domain: 3\n")
    assert {str(e) for e in skolemize(spec).evidence} == {"A(1)", "~A(3)"}


@pytest.mark.parametrize("text,msg", [
    ("forall x: A(x) | A(2)", "constants"),
    ("forall x: A(x) | (exists y: A(y))", "closed"),
])
def test_unsupported_nesting_rejected(text, msg):
    spec = parse_sentence(f"predicates: A/1\nsentence: {text}\ndomain: 3\n")
    with pytest.raises(SpecError, match=msg):
        solve(spec)


def test_top_level_existential_rejected():
    spec = parse_sentence("predicates: A/1\nsentence: exists x: A(x)\ndomain: 3\n")
    with pytest.raises(SpecError, match="existential"):
        solve(spec)


def test_nnf_pushes_negations_to_atoms():
    f = to_nnf(parse_formula("~(A(x) -> (B(x) <-> ~C(x))) | ~forall y: R(x,y)"))

    def check(g):
        if isinstance(g, Not):
            assert isinstance(g.arg, Atom)
            return
        assert not isinstance(g, (Implies, Iff))
        if isinstance(g, (And, Or)):
            check(g.left)
            check(g.right)
        elif isinstance(g, (Forall, Exists)):
            check(g.body)
    check(f)
