import os
import subprocess
import sys

import pytest

from wfomc2 import parse_sentence, solve
from wfomc2.generators import gen_grid, gen_ws
from wfomc2.kernel import active_backend, available_backends, set_backend, use_backend

needs_compiled = pytest.mark.skipif("compiled" not in available_backends(),
                                    reason="compiled kernel not built")

CASES = [
    lambda: gen_ws(7, 3),
    lambda: gen_grid(2, 3, "independent-set"),
    lambda: parse_sentence(
        "predicates: A/1 weight 1/2 1, B/1 weight 3 2, R/2 weight 2/3 1\n"
        "sentence: forall x forall y: (pred2(x,y) -> (A(x) -> B(y))) & (R(x,y) -> ~A(y))\n"
        "axiom: linear(leq, pred1, pred2)\nevidence: A(2), ~B(5)\ndomain: 7\n"),
    lambda: parse_sentence(
        "predicates: A/1 weight 2 1\nsentence: forall x forall y: cirpred(x,y) -> ~(A(x) & A(y))\n"
        "axiom: linear(leq, cirpred)\ndomain: 9\noptions: ring=float\n"),
]


@needs_compiled
@pytest.mark.parametrize("make", CASES)
def test_backends_agree(make):
    spec = make()
    out = {}
    for b in ("python", "compiled"):
        with use_backend(b):
            r = solve(spec)
            assert r.backend == b
            out[b] = (r.value, r.fixed_order_value, r.stage_keys)
    assert out["python"] == out["compiled"]


def test_unknown_backend():
    with pytest.raises(ValueError, match="not available"):
        set_backend("fortran")


def test_use_backend_restores():
    before = active_backend()
    with pytest.raises(RuntimeError):
        with use_backend("python"):
            assert active_backend() == "python"
            raise RuntimeError
    assert active_backend() == before


def test_environment_forces_python():
    code = "from wfomc2 import active_backend; print(active_backend())"
    env = {**os.environ, "WFOMC2_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "python"
