import csv

import pytest

from wfomc2.bench import COLUMNS, Family, check_agreement, compute_row, parse_range, run_bench
from wfomc2.syntax import SpecError


def test_parse_range():
    assert parse_range("3..6") == [3, 4, 5, 6]
    assert parse_range("10..30..10") == [10, 20, 30]
    assert parse_range("4, 8,16") == [4, 8, 16]
    with pytest.raises(SpecError):
        parse_range("1..5..0")


def test_family_names_and_sizes():
    ws = Family("ws", m="n/2")
    assert ws.name == "ws[m=n/2]" and ws.chords(9) == 4
    grid = Family("grid", rows=3, payload="independent-set")
    assert grid.build(6).domain_size == 6
    with pytest.raises(SpecError):
        grid.build(7)


def test_compute_row_in_process():
    row = compute_row(Family("chain"), "native", 10)
    assert row["result"] == str(2 ** 10 + 1)
    assert row["peak_keys"] >= 1 and row["seconds"] >= 0


def test_csv_schema_and_resume(tmp_path):
    out = tmp_path / "b.csv"
    logs = []
    fam = Family("ws", m="1")
    rep = run_bench(fam, [5, 6], ["native", "legacy"], out, timeout=120, log=logs.append)
    assert not rep.mismatches
    with out.open() as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0]) == COLUMNS
    assert {(r["variant"], r["n"]) for r in rows} == {
        ("native", "5"), ("legacy-encoding", "5"), ("native", "6"), ("legacy-encoding", "6")}
    assert len(logs) == 4
    # a second call with one more size only runs the new rows
    logs.clear()
    rep = run_bench(fam, [5, 6, 7], ["native"], out, timeout=120, log=logs.append)
    assert len(logs) == 1 and len(rep.rows) == 5


def test_timeout_row(tmp_path):
    out = tmp_path / "t.csv"
    rep = run_bench(Family("chain"), [50], ["native"], out, timeout=0.01, log=lambda s: None)
    (row,) = rep.rows
    assert row["result"] == "timeout" and row["peak_keys"] == ""


def test_error_row(tmp_path):
    out = tmp_path / "e.csv"
    rep = run_bench(Family("chain"), [5], ["cyclic"], out, timeout=120, log=lambda s: None)
    assert rep.rows[0]["result"].startswith("error")
    assert not rep.mismatches


def test_mismatch_detection():
    rows = [
        {"instance": "x", "variant": "native", "n": "4", "result": "10"},
        {"instance": "x", "variant": "oracle", "n": "4", "result": "11"},
        {"instance": "x", "variant": "legacy-encoding", "n": "4", "result": "timeout"},
        {"instance": "x", "variant": "native", "n": "5", "result": "2.5"},
        {"instance": "x", "variant": "oracle", "n": "5", "result": "2.5000000000001"},
    ]
    assert check_agreement(rows) == [("x", 4, "native", 10, "oracle", 11)]
