"""Compiled vs pure-Python DP kernel on a few representative workloads.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each workload is solved with both backends; the best of ``--repeat`` runs is
reported together with the speedup and a check that both backends agree.
"""
import argparse
import json
import sys
import time

from wfomc2 import available_backends, parse_sentence, solve, use_backend
from wfomc2.generators import gen_chain, gen_grid, gen_weather, gen_ws

TWO_SUCCESSORS = """
predicates: A/1 weight 1/2 1, B/1 weight 3 2, R/2 weight 2/3 2/3, S/2 weight 2 1
sentence: forall x forall y: (~S(y,x) | S(y,y)) & (pred2(x,y) -> (A(x) -> B(y)))
axiom: linear(leq, pred1, pred2)
domain: 12
"""

RING_OF_COLOURS = """
predicates: Red/1 weight 2 1, Blue/1 weight 1/3 1, F/2 weight 1/2 1
sentence: forall x forall y: (cirpred(x,y) -> ~(Red(x) & Red(y))) & (F(x,y) -> Blue(y))
axiom: linear(leq, cirpred)
domain: 24
"""

WORKLOADS = {
    "two successors, rational, n=12": lambda: parse_sentence(TWO_SUCCESSORS),
    "cyclic colouring, rational, n=24": lambda: parse_sentence(RING_OF_COLOURS),
    "small-world m=n/2, n=14": lambda: gen_ws(14, 7),
    "grid 2x5 independent sets": lambda: gen_grid(2, 5, "independent-set"),
    "weather (k=3), float, n=256": lambda: gen_weather("weather", 256),
    "identity chain, n=3000": lambda: gen_chain(3000),
}


def best_of(spec, repeat):
    best, value = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = solve(spec, fixed_order=True).value
        best = min(best, time.perf_counter() - t0)
    return best, value


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args(argv)
    if "compiled" not in available_backends():
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return 1
    rows = []
    print(f"{'workload':36s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}  agree")
    for name, make in WORKLOADS.items():
        spec = make()
        times = {}
        values = {}
        for backend in ("python", "compiled"):
            with use_backend(backend):
                times[backend], values[backend] = best_of(spec, args.repeat)
        agree = values["python"] == values["compiled"]
        speedup = times["python"] / times["compiled"]
        rows.append({"workload": name, **{f"{b}_seconds": t for b, t in times.items()},
                     "speedup": speedup, "agree": agree})
        print(f"{name:36s} {times['python']:10.4f} {times['compiled']:11.4f} "
              f"{speedup:7.2f}x  {'yes' if agree else 'NO'}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if all(r["agree"] for r in rows) else 2


if __name__ == "__main__":
    sys.exit(main())
