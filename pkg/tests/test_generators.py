import pytest

from wfomc2 import parse_sentence, solve
from wfomc2.generators import (
    gen_chain, gen_grid, gen_weather, gen_ws, grid_independent_sets, ws_count,
)
from wfomc2.parser import print_sentence
from wfomc2.syntax import SpecError


@pytest.mark.parametrize("n,m", [(3, 0), (5, 2), (6, 3), (7, 0), (7, 7)])
def test_ws_counts(n, m):
    r = solve(gen_ws(n, m))
    assert r.fixed_order_value == ws_count(n, m)


@pytest.mark.parametrize("n,m", [(5, 2), (6, 3)])
def test_ws_legacy_form_agrees(n, m):
    native, legacy = solve(gen_ws(n, m)), solve(gen_ws(n, m, legacy=True))
    assert legacy.fixed_order_value == native.fixed_order_value
    assert legacy.value == native.value


def test_ws_parameter_checks():
    with pytest.raises(SpecError):
        gen_ws(3, 4)
    with pytest.raises(SpecError):
        gen_ws(2, 0)
    with pytest.raises(ValueError):
        ws_count(2, 0)


@pytest.mark.parametrize("rows,cols", [(1, 4), (2, 2), (2, 3), (3, 2)])
def test_grid_independent_sets(rows, cols):
    r = solve(gen_grid(rows, cols, "independent-set"))
    assert r.fixed_order_value == grid_independent_sets(rows, cols)


def test_grid_without_payload_has_one_layout():
    assert solve(gen_grid(2, 3)).fixed_order_value == 1


def test_grid_size_check():
    with pytest.raises(SpecError):
        gen_grid(1, 1)


def test_chain():
    for n in (1, 2, 5, 40):
        assert solve(gen_chain(n)).fixed_order_value == 2 ** n + 1


def test_weather_shape():
    w = gen_weather("weather", 6)
    assert w.axiom.preds == (1, 2, 3) and w.options.ring == "float"
    assert gen_weather("weather2", 6).axiom.preds == (1,)
    with pytest.raises(SpecError):
        gen_weather("hail")


@pytest.mark.parametrize("make", [
    lambda: gen_ws(6, 2), lambda: gen_ws(6, 2, legacy=True), lambda: gen_grid(2, 3, "independent-set"),
    lambda: gen_weather("weather", 5), lambda: gen_chain(4),
])
def test_generated_text_round_trips(make):
    spec = make()
    assert parse_sentence(print_sentence(spec)) == spec
