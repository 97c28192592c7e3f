import json

import pytest

from gbportfolio.cli import load_instance, main, read_assets
from gbportfolio.errors import DimensionMismatch, ParseError
from gbportfolio.report import SolveReport
from gbportfolio.search import discrete_optimum


def test_solve_illustrative(data_dir, tmp_path, capsys):
    out_json = tmp_path / "r.json"
    trace = tmp_path / "trace.txt"
    code = main(["solve", "-i", str(data_dir / "illustrative.csv"),
                 "-c", str(data_dir / "illustrative_cov.csv"), "--budget", "9000000",
                 "--risk", "3e-5", "--json", str(out_json), "--trace", str(trace)])
    assert code == 0
    out = capsys.readouterr().out
    assert "optimum (779, 207)" in out
    assert "gap 2215" in out
    doc = json.loads(out_json.read_text())
    assert doc["optimum"] == [779, 207]
    assert "node (779,207) delta1=2215 action=feasible-improve" in trace.read_text()


def test_oracle_check_and_scaling(tmp_path, capsys):
    inst = tmp_path / "i.csv"
    cov = tmp_path / "c.csv"
    inst.write_text("ticker,price,return\nA,3,4\nB,5,7\n")
    cov.write_text("2.0,0.5\n0.5,1.0\n")
    code = main(["solve", "-i", str(inst), "-c", str(cov), "--budget", "4", "--risk", "0.2",
                 "--scale-pow10", "1", "--oracle-check"])
    assert code == 0
    assert "agrees" in capsys.readouterr().out


def test_border_risk_command(data_dir, capsys):
    code = main(["border-risk", "-i", str(data_dir / "illustrative.csv"),
                 "-c", str(data_dir / "illustrative_cov.csv")])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("border risk r_b^2 = ")
    assert "J = {1:x1, 2:x2}" in out


@pytest.mark.parametrize("text, msg", [
    ("price,ticker,return\n", "header"),
    ("ticker,price,return\nA,3\n", "expected 3 fields"),
    ("ticker,price,return\nA,x,4\n", "not an integer"),
])
def test_parse_errors(tmp_path, text, msg):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ParseError, match=msg):
        read_assets(path)


def test_dimension_mismatch(tmp_path, data_dir):
    cov = tmp_path / "c.csv"
    cov.write_text("1.0\n")
    with pytest.raises(DimensionMismatch):
        load_instance(data_dir / "illustrative.csv", cov, 10, 0.1)


def test_exit_code_on_bad_input(tmp_path, data_dir, capsys):
    code = main(["solve", "-i", str(tmp_path / "missing.csv"),
                 "-c", str(data_dir / "illustrative_cov.csv"), "--budget", "1", "--risk", "1"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_exit_code_on_exhausted_completion(tmp_path, data_dir, capsys):
    code = main(["solve", "-i", str(data_dir / "mixed.csv"), "-c", str(data_dir / "mixed_cov.csv"),
                 "--budget", "5000000", "--risk", "1.52", "--tie-break", "grevlex",
                 "--max-pairs", "100"])
    assert code == 2


def test_report_json_roundtrip(illustrative):
    rep = discrete_optimum(illustrative)
    back = SolveReport.from_json(rep.to_json())
    assert back == rep
    table = rep.table()
    assert "optimum (779, 207)" in table and "proven optimal" in table
