import pytest

from wfomc2.cli import main
from wfomc2.parser import parse_sentence

SMOKERS = """predicates: Sm/1, Fr/2
sentence: forall x forall y: (Sm(x) & Fr(x,y) -> Sm(y)) & (pred1(x,y) -> Fr(x,y))
axiom: linear(leq, pred1)
domain: 3
"""


@pytest.fixture
def spec_file(tmp_path):
    p = tmp_path / "s.wfomc"
    p.write_text(SMOKERS)
    return p


def test_solve(spec_file, capsys):
    assert main(["solve", str(spec_file), "--stats"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].isdigit()
    assert out[1].startswith("fixed-order: ")
    assert int(out[0]) == 6 * int(out[1].split()[1])
    assert "peak_keys=" in out[2]


def test_solve_fixed_order_and_override(spec_file, capsys):
    assert main(["solve", str(spec_file), "--fixed-order", "--n", "2"]) == 0
    out = capsys.readouterr().out.split()
    assert out == ["20"]      # 5 assignments of Sm(1), Sm(2), Fr(2,1) times 4 free loops


def test_solve_float_ring(spec_file, capsys):
    assert main(["solve", str(spec_file), "--ring", "float", "--fixed-order"]) == 0
    assert "." in capsys.readouterr().out


def test_dump_tables(spec_file, tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["solve", str(spec_file), "--dump-tables", str(out)]) == 0
    assert out.read_text().startswith("table,i,j,s,value")


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.wfomc"
    bad.write_text("predicates: A/1\nsentence: forall x: A(x) &\n")
    assert main(["solve", str(bad)]) == 1
    assert capsys.readouterr().err.startswith("error [parse]: line 2")


def test_missing_file(capsys):
    assert main(["solve", "/nonexistent/x.wfomc"]) == 1
    assert "error [read]" in capsys.readouterr().err


def test_semantic_error_stage(tmp_path, capsys):
    f = tmp_path / "e.wfomc"
    f.write_text("predicates: A/1\nsentence: exists x: A(x)\ndomain: 2\n")
    assert main(["solve", str(f)]) == 1
    assert "error [normalize]" in capsys.readouterr().err


def test_timeout(tmp_path, capsys):
    f = tmp_path / "big.wfomc"
    f.write_text("predicates: A/1, B/1, C/1, R/2, S/2\nsentence: forall x forall y: "
                 "(pred1(x,y) -> (A(x) | B(y))) & (R(x,y) -> (C(x) <-> S(y,x)))\n"
                 "axiom: linear(leq, pred1)\ndomain: 400\n")
    assert main(["solve", str(f), "--timeout", "0.2"]) == 3
    assert "timeout" in capsys.readouterr().err


def test_oracle_and_compare(spec_file, capsys):
    assert main(["oracle", str(spec_file), "--fixed-order"]) == 0
    fixed = capsys.readouterr().out.strip()
    assert main(["compare", str(spec_file), "--variants", "native,pred1,reference,legacy,oracle"]) == 0
    out = capsys.readouterr().out
    assert out.strip().endswith("agree")
    assert main(["solve", str(spec_file), "--fixed-order"]) == 0
    assert capsys.readouterr().out.strip() == fixed


def test_compare_rejects_inapplicable_variant(spec_file, capsys):
    assert main(["compare", str(spec_file), "--variants", "native,cyclic"]) == 1
    assert "error [cyclic]" in capsys.readouterr().err


def test_gen_round_trip(tmp_path, capsys):
    out = tmp_path / "ws.wfomc"
    assert main(["gen", "ws", "6", "2", "--out", str(out)]) == 0
    assert parse_sentence(out.read_text()).domain_size == 6
    assert main(["gen", "chain", "5"]) == 0
    assert "pred1" in capsys.readouterr().out
    with pytest.raises(SystemExit):
        main(["gen", "grid", "3"])


def test_gen_bad_parameters(capsys):
    assert main(["gen", "ws", "3", "4"]) == 1
    assert "error [gen]" in capsys.readouterr().err


def test_backend_option(spec_file, capsys):
    assert main(["--backend", "python", "solve", str(spec_file), "--stats"]) == 0
    assert "backend=python" in capsys.readouterr().out


def test_evidence_note(tmp_path, capsys):
    f = tmp_path / "ev.wfomc"
    f.write_text(SMOKERS.replace("domain: 3", "evidence: Sm(1)\ndomain: 3"))
    assert main(["solve", str(f)]) == 0
    assert "evidence elements keep their identity" in capsys.readouterr().err
    assert main(["solve", str(f), "--fixed-order"]) == 0
    assert capsys.readouterr().err == ""
