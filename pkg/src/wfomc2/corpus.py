"""Permutation-counting problems shipped with the package.

Each ``corpus/<name>.wfomc`` file has a pinned value in ``corpus/expected.json``.
Pinned values come from two independent sources: a direct enumeration of
seatings/arrangements below (no logic involved) and, when the instance is
small enough, the ground oracle.  ``python -m wfomc2.corpus --regen-expected``
rebuilds the file and refuses to write if the sources disagree.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from .oracle import OracleLimitError, oracle_wfomc_full
from .parser import parse_sentence
from .syntax import SentenceSpec

CORPUS_DIR = Path(__file__).with_name("corpus")
EXPECTED_FILE = CORPUS_DIR / "expected.json"


def _count(n: int, ok) -> int:
    """Number of orderings ``seq`` of people 0..n-1 (seq[i] = person at spot i) with ok(seq)."""
    return sum(1 for seq in itertools.permutations(range(n)) if ok(seq))


def _spot(seq, person):
    return seq.index(person)


def _row_adjacent(seq, a, b):
    return abs(_spot(seq, a) - _spot(seq, b)) == 1


def _circle_adjacent(seq, a, b):
    d = abs(_spot(seq, a) - _spot(seq, b))
    return d == 1 or d == len(seq) - 1


def _block(seq, members):
    spots = sorted(_spot(seq, m) for m in members)
    return spots[-1] - spots[0] == len(spots) - 1


def _alternates(seq, group, cyclic):
    n = len(seq)
    pairs = range(n) if cyclic else range(n - 1)
    return all((seq[i] in group) != (seq[(i + 1) % n] in group) for i in pairs)


ENUMERATORS = {
    "bookshelf": lambda: _count(8, lambda s: _block(s, {0, 1, 2}) and _block(s, {3, 4, 5, 6, 7})),
    "seating": lambda: _count(8, lambda s: not _circle_adjacent(s, 0, 1)),
    "seating_nextto": lambda: _count(8, lambda s: not _circle_adjacent(s, 0, 1)),
    "row_not_adjacent": lambda: _count(5, lambda s: not _row_adjacent(s, 0, 1)),
    "row_together": lambda: _count(6, lambda s: _row_adjacent(s, 0, 1)),
    "circle_together": lambda: _count(7, lambda s: _circle_adjacent(s, 0, 1)),
    "alternating_row": lambda: _count(6, lambda s: _alternates(s, {0, 1, 2}, False)),
    "alternating_circle": lambda: _count(8, lambda s: _alternates(s, {0, 1, 2, 3}, True)),
    "three_together": lambda: _count(7, lambda s: _block(s, {0, 1, 2})),
    "no_two_adjacent": lambda: _count(
        6, lambda s: not any(s[i] < 3 and s[i + 1] < 3 for i in range(5))),
    "a_before_b": lambda: _count(5, lambda s: _spot(s, 0) < _spot(s, 1)),
    "a_right_before_b": lambda: _count(5, lambda s: _spot(s, 1) == _spot(s, 0) + 1),
    "a_at_an_end": lambda: _count(6, lambda s: _spot(s, 0) in (0, 5)),
}


def names() -> list:
    return sorted(p.stem for p in CORPUS_DIR.glob("*.wfomc"))


def path(name: str) -> Path:
    return CORPUS_DIR / f"{name}.wfomc"


def load(name: str) -> SentenceSpec:
    return parse_sentence(path(name).read_text())


def expected() -> dict:
    return json.loads(EXPECTED_FILE.read_text())


def regenerate(max_atoms: int = 26) -> dict:
    """Recompute every pinned value; raises if enumeration and oracle disagree."""
    out = {}
    for name in names():
        spec = load(name)
        value = ENUMERATORS[name]()
        sources = ["enumeration"]
        try:
            o = oracle_wfomc_full(spec, max_atoms=max_atoms)
        except OracleLimitError:
            o = None
        if o is not None:
            if o != value:
                raise AssertionError(f"{name}: oracle {o} != enumeration {value}")
            sources.append("oracle")
        out[name] = {"n": spec.domain_size, "value": str(value), "sources": sources}
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m wfomc2.corpus",
                                 description="List or rebuild the pinned corpus values.")
    ap.add_argument("--regen-expected", action="store_true",
                    help="recompute expected.json from enumeration and the oracle")
    args = ap.parse_args(argv)
    if args.regen_expected:
        data = regenerate()
        EXPECTED_FILE.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        print(f"wrote {len(data)} entries to {EXPECTED_FILE}")
        return 0
    for name, entry in sorted(expected().items()):
        print(f"{name:22s} n={entry['n']:<3d} {entry['value']:>8s}  ({', '.join(entry['sources'])})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
