"""Command-line interface: ``wfomc2 <command> ...`` or ``python -m wfomc2``.

Exit codes: 0 success, 1 input error, 2 internal error or variant mismatch,
3 timeout (``solve`` only).
"""
from __future__ import annotations

import argparse
import json
import signal
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import corpus, generators, kernel
from .bench import DEFAULT_TIMEOUT, Family, compute_row, parse_range, run_bench
from .dp import InternalError, solve
from .normalize import pairwise_form
from .oracle import MAX_ATOMS, oracle_wfomc_fixed_order, oracle_wfomc_full
from .parser import parse_sentence, print_sentence
from .syntax import WFOMCError
from .tables import dump_tables
from .variants import canonical, run_variant, values_agree

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_TIMEOUT = 0, 1, 2, 3


class _Stage(Exception):
    def __init__(self, stage: str, exc: Exception):
        super().__init__(str(exc))
        self.stage = stage
        self.exc = exc


@contextmanager
def _stage(name: str):
    try:
        yield
    except (WFOMCError, ArithmeticError, ValueError, OSError) as exc:
        if isinstance(exc, InternalError):
            raise
        raise _Stage(name, exc) from exc


class _Timeout(Exception):
    pass


@contextmanager
def _deadline(seconds):
    if not seconds:
        yield
        return

    def fire(signum, frame):
        raise _Timeout()

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, float(seconds))
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _load(path: str):
    with _stage("read"):
        text = Path(path).read_text()
    with _stage("parse"):
        return parse_sentence(text)


def _render(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


# -- commands ----------------------------------------------------------------

def cmd_solve(args) -> int:
    spec = _load(args.file)
    with _stage("normalize"):
        pairwise_form(spec if args.n is None else spec.with_domain(args.n))
    try:
        with _deadline(args.timeout), _stage("count"):
            res = solve(spec, n=args.n, ring=args.ring, fixed_order=args.fixed_order or None)
    except _Timeout:
        print(f"timeout after {args.timeout:g} s", file=sys.stderr)
        return EXIT_TIMEOUT
    print(res.render())
    if res.fixed_order_value is not None and not res.fixed_order:
        print(f"fixed-order: {res.render(res.fixed_order_value)}")
        if spec.evidence:
            print("note: evidence elements keep their identity while the order varies; "
                  "only interchangeable elements are permuted", file=sys.stderr)
    if args.stats:
        print(f"n={res.n} ring={res.ring} cells={res.cells}/{res.total_cells} "
              f"peak_keys={res.peak_keys} backend={res.backend} seconds={res.seconds:.4f}")
    if args.dump_tables:
        from .dp import prepare
        with _stage("tables"):
            dump_tables(prepare(spec, args.n, args.ring).tables, args.dump_tables)
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = _load(args.file)
    with _stage("oracle"):
        if args.fixed_order:
            v = oracle_wfomc_fixed_order(spec, args.n, args.ring, max_atoms=args.max_atoms)
        else:
            v = oracle_wfomc_full(spec, args.n, args.ring, max_atoms=args.max_atoms)
    print(_render(v))
    return EXIT_OK


def cmd_compare(args) -> int:
    spec = _load(args.file)
    names = [canonical(v.strip()) for v in args.variants.split(",") if v.strip()]
    results = []
    for name in names:
        t0 = time.perf_counter()
        with _stage(name):
            res = run_variant(spec, name, n=args.n, fixed_order=args.fixed_order,
                              max_atoms=args.max_atoms)
        dt = time.perf_counter() - t0
        results.append((name, res.value))
        peak = "" if res.peak_keys is None else f"  peak_keys={res.peak_keys}"
        print(f"{name:>16s}  {_render(res.value)}  ({dt:.3f} s){peak}")
    ok = all(values_agree(results[0][1], v) for _, v in results[1:])
    print("agree" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_INTERNAL


def _family(args) -> Family:
    return Family(args.gen, m=args.m, rows=args.rows, payload=args.payload,
                  variant=args.weather)


def cmd_bench(args) -> int:
    with _stage("bench"):
        sizes = parse_range(args.range)
        variants = [v.strip() for v in args.variants.split(",") if v.strip()]
        fam = _family(args)
        report = run_bench(fam, sizes, variants, args.out, timeout=args.timeout,
                           parallel=args.parallel)
    for inst, n, va, a, vb, b in report.mismatches:
        print(f"MISMATCH {inst} n={n}: {va}={a} vs {vb}={b}", file=sys.stderr)
    return EXIT_INTERNAL if report.mismatches else EXIT_OK


def cmd_row(args) -> int:
    with _stage("row"):
        print(json.dumps(compute_row(_family(args), args.variant, args.n)))
    return EXIT_OK


def cmd_gen(args) -> int:
    with _stage("gen"):
        if args.family == "ws":
            n, m = args.params
            spec = generators.gen_ws(n, m, legacy=args.legacy)
        elif args.family == "grid":
            rows, cols = args.params
            spec = generators.gen_grid(rows, cols, args.payload)
        elif args.family == "weather":
            (n,) = args.params
            spec = generators.gen_weather(args.weather, n)
        else:
            (n,) = args.params
            spec = generators.gen_chain(n)
    text = print_sentence(spec)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.regen_expected:
        return corpus.main(["--regen-expected"])
    expected = corpus.expected()
    bad = 0
    for name in corpus.names():
        spec = corpus.load(name)
        res = solve(spec)
        want = expected[name]["value"]
        ok = str(res.value) == want
        bad += not ok
        print(f"{name:22s} {res.render():>10s}  expected {want:>10s}  "
              f"{res.seconds:8.3f} s  {'ok' if ok else 'WRONG'}")
    return EXIT_OK if not bad else EXIT_INTERNAL


# -- argument parsing ----------------------------------------------------------

_GEN_ARITY = {"ws": 2, "grid": 2, "weather": 1, "chain": 1}


def _family_args(p):
    p.add_argument("--gen", required=True, choices=sorted(generators.GENERATORS))
    p.add_argument("--m", default=None, help="ws chord count: an integer or n/K")
    p.add_argument("--rows", type=int, default=2, help="grid rows (the domain is rows*cols)")
    p.add_argument("--payload", default=None, help="grid payload, e.g. independent-set")
    p.add_argument("--weather", default="weather", choices=["weather", "weather2"])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wfomc2", description=(
        "Exact weighted model counting for two-variable sentences over ordered domains."))
    ap.add_argument("--backend", choices=["python", "compiled"],
                    help="DP kernel backend (default: compiled when built)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="count the models of an instance file")
    p.add_argument("file")
    p.add_argument("--ring", choices=["rational", "float"])
    p.add_argument("--fixed-order", action="store_true",
                   help="count with the order fixed to 1 < 2 < ... < n")
    p.add_argument("--n", type=int, help="override the domain size")
    p.add_argument("--timeout", type=float, default=None, help="seconds (exit code 3)")
    p.add_argument("--dump-tables", metavar="CSV", help="write every weight table entry")
    p.add_argument("--stats", action="store_true", help="print run statistics")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force count for tiny domains")
    p.add_argument("file")
    p.add_argument("--ring", choices=["rational", "float"])
    p.add_argument("--fixed-order", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--max-atoms", type=int, default=MAX_ATOMS)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="run several variants and check they agree")
    p.add_argument("file")
    p.add_argument("--variants", default="native,oracle",
                   help="comma list of: native, plain, linear, pred1, cyclic, general-k, "
                        "reference, legacy-encoding, oracle")
    p.add_argument("--n", type=int)
    p.add_argument("--fixed-order", action="store_true")
    p.add_argument("--max-atoms", type=int, default=MAX_ATOMS)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="timing sweep written as CSV")
    _family_args(p)
    p.add_argument("--range", required=True, help="A..B, A..B..step or a comma list")
    p.add_argument("--variants", default="native")
    p.add_argument("--out", required=True)
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="seconds per row")
    p.add_argument("--parallel", type=int, default=1, metavar="JOBS",
                   help="run this many rows concurrently")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("_row", help=argparse.SUPPRESS)
    _family_args(p)
    p.add_argument("--variant", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_row)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("family", choices=sorted(_GEN_ARITY))
    p.add_argument("params", type=int, nargs="+",
                   help="ws: N M; grid: ROWS COLS; weather: N; chain: N")
    p.add_argument("--legacy", action="store_true", help="ws: emit the permutation encoding")
    p.add_argument("--payload", default=None, help="grid: payload such as independent-set")
    p.add_argument("--weather", default="weather", choices=["weather", "weather2"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("corpus", help="solve the shipped corpus against pinned values")
    p.add_argument("--regen-expected", action="store_true")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)      # exact counts can have many digits
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "gen" and len(args.params) != _GEN_ARITY[args.family]:
        ap.error(f"gen {args.family} takes {_GEN_ARITY[args.family]} integer parameter(s)")
    try:
        if args.backend:
            kernel.set_backend(args.backend)
        return args.func(args)
    except _Stage as e:
        print(f"error [{e.stage}]: {e.exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
