import pytest

from wfomc2 import parse_sentence, solve
from wfomc2.legacy import cyclic_to_first_last, cyclic_to_permutation, legacy_encoding, pred1_to_permutation
from wfomc2.oracle import oracle_wfomc_fixed_order

PRED1 = ("predicates: A/1 weight 2 1, B/1 weight 1/2 1\n"
         "sentence: forall x forall y: pred1(x,y) -> (A(x) | A(y)) & (B(x) -> ~B(y))\n"
         "axiom: linear(leq, pred1)\n")
CYCLIC = ("predicates: A/1 weight 3 1\n"
          "sentence: forall x forall y: cirpred(x,y) -> ~(A(x) & A(y))\n"
          "axiom: linear(leq, cirpred)\n")


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_pred1_permutation_encoding(n):
    spec = parse_sentence(PRED1 + f"domain: {n}\n")
    enc = pred1_to_permutation(spec)
    assert enc.axiom.preds == ()
    assert solve(enc).value == solve(spec).value
    assert solve(enc).fixed_order_value == solve(spec).fixed_order_value


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("encode", [cyclic_to_permutation, cyclic_to_first_last])
def test_cyclic_encodings(n, encode):
    spec = parse_sentence(CYCLIC + f"domain: {n}\n")
    enc = encode(spec)
    assert not enc.axiom.cyclic
    assert solve(enc).fixed_order_value == solve(spec).fixed_order_value


def test_encoding_agrees_with_oracle():
    spec = parse_sentence(CYCLIC + "domain: 4\n")
    assert solve(legacy_encoding(spec)).fixed_order_value == oracle_wfomc_fixed_order(spec)


def test_fresh_names_avoid_clashes():
    spec = parse_sentence(PRED1.replace("B/1", "Perm/1").replace("B(", "Perm(") + "domain: 4\n")
    enc = legacy_encoding(spec)
    names = [p.name for p in enc.vocabulary]
    assert len(names) == len(set(names))
    assert solve(enc).value == solve(spec).value
