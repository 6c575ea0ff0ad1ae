import pytest

from wfomc2 import corpus, solve
from wfomc2.oracle import oracle_wfomc_full

EXPECTED = corpus.expected()


def test_every_instance_has_a_pinned_value():
    assert set(corpus.names()) == set(EXPECTED)
    assert len(corpus.names()) >= 10


@pytest.mark.parametrize("name", corpus.names())
def test_enumeration_matches_pinned(name):
    if name not in corpus.ENUMERATORS:
        pytest.skip("no enumerator")
    assert str(corpus.ENUMERATORS[name]()) == EXPECTED[name]["value"]


@pytest.mark.parametrize("name", corpus.names())
def test_engine_matches_pinned(name):
    assert str(solve(corpus.load(name)).value) == EXPECTED[name]["value"]


@pytest.mark.parametrize("name", ["a_before_b", "a_right_before_b", "no_two_adjacent"])
def test_oracle_matches_pinned(name):
    assert str(oracle_wfomc_full(corpus.load(name), max_atoms=26)) == EXPECTED[name]["value"]
