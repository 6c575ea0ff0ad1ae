"""Timing sweeps over the generator families, written as CSV.

Columns: ``instance, variant, n, seconds, result, peak_keys``.  Each row runs
in its own subprocess so a per-row timeout can kill runaway variants; a
timed-out row records ``timeout`` as its result and the sweep carries on.
Rows already present in the output file are skipped, so an interrupted sweep
resumes where it stopped.  Rows that finish in under a second are run twice
and the first (warm-up) timing is discarded.
"""
from __future__ import annotations

import csv
import json
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import generators
from .syntax import SentenceSpec, SpecError
from .variants import canonical, run_variant, values_agree

COLUMNS = ("instance", "variant", "n", "seconds", "result", "peak_keys")
DEFAULT_TIMEOUT = 300.0
WARMUP_BELOW = 1.0


@dataclass(frozen=True)
class Family:
    """A generator plus its fixed parameters."""

    gen: str
    m: Optional[str] = None          # ws: chord count, an integer or "n/K"
    rows: int = 2                    # grid: rows (columns vary with n)
    payload: Optional[str] = None    # grid payload
    variant: str = "weather"         # weather variant

    @property
    def name(self) -> str:
        if self.gen == "ws":
            return f"ws[m={self.m or 0}]"
        if self.gen == "grid":
            return f"grid[rows={self.rows}{',' + self.payload if self.payload else ''}]"
        if self.gen == "weather":
            return self.variant
        return self.gen

    def chords(self, n: int) -> int:
        m = self.m or "0"
        if m.startswith("n/"):
            return n // int(m[2:])
        return int(m)

    def build(self, n: int, legacy: bool = False) -> SentenceSpec:
        """The instance of size ``n``; ``legacy`` asks for the generator's own legacy form."""
        if self.gen == "ws":
            return generators.gen_ws(n, self.chords(n), legacy=legacy)
        if self.gen == "grid":
            if n % self.rows:
                raise SpecError(f"grid domain {n} is not a multiple of rows={self.rows}")
            return generators.gen_grid(self.rows, n // self.rows, self.payload)
        if self.gen == "weather":
            return generators.gen_weather(self.variant, n)
        if self.gen == "chain":
            return generators.gen_chain(n)
        raise SpecError(f"unknown generator {self.gen!r}")

    def to_args(self) -> list:
        args = ["--gen", self.gen, "--rows", str(self.rows), "--weather", self.variant]
        if self.m is not None:
            args += ["--m", self.m]
        if self.payload:
            args += ["--payload", self.payload]
        return args


def parse_range(text: str) -> list:
    """``A..B`` or ``A..B..step`` (inclusive), or a comma-separated list."""
    if ".." in text:
        parts = [int(p) for p in text.split("..")]
        if len(parts) == 2:
            parts.append(1)
        if len(parts) != 3 or parts[2] <= 0:
            raise SpecError(f"bad range {text!r}; expected A..B or A..B..step")
        return list(range(parts[0], parts[1] + 1, parts[2]))
    return [int(p) for p in text.split(",") if p.strip()]


def compute_row(family: Family, variant: str, n: int) -> dict:
    """Run one (variant, n) cell in this process; returns result, seconds and peak keys."""
    variant = canonical(variant)

    def once():
        if variant == "legacy-encoding" and family.gen == "ws":
            spec, name = family.build(n, legacy=True), "native"
        else:
            spec, name = family.build(n), variant
        t0 = time.perf_counter()
        res = run_variant(spec, name, n=n, fixed_order=True, max_atoms=30)
        return res, time.perf_counter() - t0

    res, seconds = once()
    if seconds < WARMUP_BELOW:
        res, seconds = once()
    value = res.value
    text = repr(float(value)) if isinstance(value, float) else str(value)
    return {"result": text, "seconds": seconds,
            "peak_keys": "" if res.peak_keys is None else res.peak_keys}


def _run_subprocess(family: Family, variant: str, n: int, timeout: float) -> dict:
    cmd = [sys.executable, "-m", "wfomc2", "_row", *family.to_args(),
           "--variant", variant, "--n", str(n)]
    t0 = time.perf_counter()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        return {"result": "timeout", "seconds": time.perf_counter() - t0, "peak_keys": ""}
    if proc.returncode != 0:
        msg = (proc.stderr.strip().splitlines() or ["error"])[-1]
        return {"result": f"error: {msg}", "seconds": time.perf_counter() - t0,
                "peak_keys": ""}
    return json.loads(proc.stdout.strip().splitlines()[-1])


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)


def _done_rows(out: Path) -> dict:
    if not out.exists() or out.stat().st_size == 0:
        return {}
    with out.open(newline="") as fh:
        return {(r["instance"], r["variant"], int(r["n"])): r for r in csv.DictReader(fh)}


def _numeric(text: str):
    try:
        return Fraction(text) if "." not in text and "e" not in text else float(text)
    except (ValueError, ZeroDivisionError):
        return None


def check_agreement(rows: list) -> list:
    """(instance, n, variant_a, value_a, variant_b, value_b) for every disagreement."""
    by_cell: dict = {}
    for r in rows:
        v = _numeric(r["result"])
        if v is not None:
            by_cell.setdefault((r["instance"], int(r["n"])), []).append((r["variant"], v))
    bad = []
    for (inst, n), vals in sorted(by_cell.items()):
        first_var, first = vals[0]
        for var, v in vals[1:]:
            if not values_agree(first, v):
                bad.append((inst, n, first_var, first, var, v))
    return bad


def run_bench(family: Family, sizes: list, variants: list, out, timeout: float = DEFAULT_TIMEOUT,
              parallel: int = 1, log=print) -> BenchReport:
    """Fill ``out`` with one row per (variant, n); returns all rows and any mismatches."""
    out = Path(out)
    variants = [canonical(v) for v in variants]
    done = _done_rows(out)
    todo = [(v, n) for n in sizes for v in variants if (family.name, v, n) not in done]
    new_file = not out.exists() or out.stat().st_size == 0
    with out.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS)
        if new_file:
            writer.writeheader()

        def record(job, res):
            v, n = job
            row = {"instance": family.name, "variant": v, "n": n,
                   "seconds": f"{res['seconds']:.6f}", "result": res["result"],
                   "peak_keys": res["peak_keys"]}
            writer.writerow(row)
            fh.flush()
            done[(family.name, v, n)] = {k: str(x) for k, x in row.items()}
            log(f"{family.name:>24s} {v:>16s} n={n:<5d} {row['seconds']:>12s}s  "
                f"{row['result'][:40]}")

        if parallel > 1:
            with ThreadPoolExecutor(max_workers=parallel) as pool:
                futures = [(job, pool.submit(_run_subprocess, family, *job, timeout))
                           for job in todo]
                for job, fut in futures:
                    record(job, fut.result())
        else:
            for job in todo:
                record(job, _run_subprocess(family, *job, timeout))
    rows = [r for key, r in done.items() if key[0] == family.name]
    return BenchReport(rows, check_agreement(rows))
