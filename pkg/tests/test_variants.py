import pytest

from wfomc2 import parse_sentence
from wfomc2.syntax import SpecError
from wfomc2.variants import VARIANTS, canonical, run_variant, values_agree

PRED1 = parse_sentence("predicates: A/1 weight 3/2 1, R/2\n"
                       "sentence: forall x forall y: (pred1(x,y) -> ~(A(x) & A(y))) & "
                       "(R(x,y) -> A(x))\naxiom: linear(leq, pred1)\ndomain: 3\n")


def test_aliases():
    assert canonical("legacy") == "legacy-encoding"
    assert canonical("general") == "general-k"
    assert canonical("engine") == "native"
    with pytest.raises(SpecError):
        canonical("magic")


@pytest.mark.parametrize("fixed", [False, True])
def test_applicable_variants_agree(fixed):
    names = ["native", "pred1", "general-k", "reference", "legacy-encoding", "oracle"]
    values = [run_variant(PRED1, v, fixed_order=fixed).value for v in names]
    assert len(set(values)) == 1


def test_inapplicable_variants():
    for v in ("plain", "cyclic", "linear"):
        with pytest.raises(SpecError):
            run_variant(PRED1, v)
    with pytest.raises(SpecError):
        run_variant(PRED1, "legacy-encoding", n=1)
    assert set(VARIANTS) >= {"native", "oracle", "reference", "legacy-encoding"}


def test_values_agree():
    assert values_agree(3, 3) and not values_agree(3, 4)
    assert values_agree(1.0, 1.0 + 1e-12) and not values_agree(1.0, 1.001)
