import json

import pytest

from pervhilb import cli
from pervhilb.cli import RunConfig, UsageError, main, run
from pervhilb.graded import PervBettiTable


@pytest.fixture
def surface_file(tmp_path):
    def write(records, name="surface.json"):
        path = tmp_path / name
        path.write_text(json.dumps(records))
        return str(path)
    return write


P1XP1 = [{"p": 0, "d": 0, "dim": 1}, {"p": 0, "d": 2, "dim": 1},
         {"p": 2, "d": 2, "dim": 1}, {"p": 2, "d": 4, "dim": 1}]


def test_mhp_d4(capsys):
    assert main(["mhp", "--family", "D4", "--n", "1"]) == 0
    assert capsys.readouterr().out == "1+4*x*y*t^2+x^2*y^2*t^2\n"


def test_verify_family(capsys):
    assert main(["verify", "--family", "A0", "--n-max", "6"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "PASS hard Lefschetz n=6" in out and "PASS Goettsche specialization" in out


def test_verify_custom_surface_is_labeled(surface_file, capsys):
    assert main(["verify", "--surface", surface_file(P1XP1), "--n-max", "4"]) == 0
    assert "conjectural extension" in capsys.readouterr().out


def test_verify_failure_reports_first_mismatch(monkeypatch, capsys):
    real = cli.hilb.hilb_table

    def broken(surface, n):
        table = real(surface, n)
        if n == 2:
            return PervBettiTable({**table, (1, 1): table.dim(1, 1) + 1})
        return table

    monkeypatch.setattr(cli.hilb, "hilb_table", broken)
    assert main(["verify", "--family", "A0", "--n-max", "3"]) == 1
    captured = capsys.readouterr()
    assert "FAIL oracle equivalence n=2: coefficient of q^1*t^1: series=2 partition-sum=3" in captured.out
    assert "oracle equivalence n=2" in captured.err


def test_bad_surface_is_usage_error(surface_file, capsys):
    path = surface_file([{"p": 3, "d": 0, "dim": 1}], "bad.json")
    assert main(["table", "--surface", path, "--n", "1"]) == 2
    assert "perversity" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["table", "--n", "2"],
    ["table", "--family", "A0"],
    ["series", "--family", "A0", "--n", "5", "--trunc", "3"],
    ["mhp", "--surface", "x.json", "--n", "1"],
    ["export", "--family", "E8", "--format", "text"],
    ["induct", "--family", "A0"],
    ["table", "--surface", "/nonexistent/file.json", "--n", "1"],
])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["table", "--family", "A0", "--surface", "x.json", "--n", "1"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("table", family="A0", surface="x", n=1).validate()
    with pytest.raises(UsageError):
        RunConfig("table", family="Z9", n=1).validate()
    assert RunConfig("table", family="a0", n=1).validate().family == "A0~"


def test_table_formats(capsys):
    assert main(["table", "--family", "A0", "--n", "2", "--format", "csv"]) == 0
    csv_text = capsys.readouterr().out
    assert csv_text.splitlines()[:3] == ["p,d,dim", "0,0,1", "1,1,2"]
    assert main(["table", "--family", "A0", "--n", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] != cli.CONJECTURAL
    assert PervBettiTable.from_records(doc["entries"]).total_dim() == 12


def test_nested_command(capsys):
    assert main(["nested", "--family", "A0", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert PervBettiTable.from_records(doc["entries"]).degree_marginals() == [1, 4, 7, 6, 2]


def test_series_env_default(monkeypatch, capsys):
    monkeypatch.setenv(cli.TRUNC_ENV, "2")
    assert main(["series", "--family", "D4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1] == "s^2: 1+5*q*t^2+q^2*t^2+14*q^2*t^4+5*q^3*t^4+q^4*t^4"
    monkeypatch.setenv(cli.TRUNC_ENV, "many")
    assert main(["series", "--family", "D4"]) == 2


def test_series_custom_surface(surface_file, capsys):
    assert main(["series", "--surface", surface_file(P1XP1), "--trunc", "1", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] == "conjectural extension"
    assert doc["coefficients"][1]["poly"] == "1+t^2+q^2*t^2+q^2*t^4"


def test_induct(capsys):
    assert main(["induct", "--n-max", "3", "--max-k", "4"]) == 0
    out = capsys.readouterr().out
    assert "certified" in out and "bound(ch_4(O_Z3)) <= 4" in out
    assert main(["induct", "--n-max", "2", "--max-k", "3", "--format", "json", "--depth", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["certified"] and doc["search"]["p1xp1_best_bound"] == 4


def test_export_and_out_file(tmp_path, capsys):
    out = tmp_path / "e6.csv"
    assert main(["export", "--family", "E6", "--n-max", "2", "--format", "csv", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().splitlines()[0] == "family,n,p,d,dim"
    assert main(["table", "--family", "A0", "--n", "1", "--out", str(tmp_path / "no" / "x")]) == 2


def test_run_returns_outcome():
    outcome = run(RunConfig("mhp", family="A0", n=1))
    assert outcome.status == 0 and outcome.document == "1+2*x*y*t+x^2*y^2*t^2\n"


def test_identical_configs_identical_output(capsys):
    for argv in (["series", "--family", "E7", "--trunc", "4", "--format", "json"],
                 ["verify", "--family", "D4", "--n-max", "3"]):
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first
