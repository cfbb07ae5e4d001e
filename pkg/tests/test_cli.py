import json
import subprocess
import sys

import pytest

from speczeta.cli import main, parse_complex, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "text,expected",
    [("0.25", 0.25), ("0.5+10i", 0.5 + 10j), ("-1-0.7i", -1 - 0.7j), ("2i", 2j), ("1e-3+2.5e1i", 0.001 + 25j)],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["1+", "i", "abc", "1+2", "1+2j", "inf", "1++2i"])
def test_parse_complex_rejects(text):
    import argparse

    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex(text)


def test_parse_grid():
    g = parse_grid("0.05:0.45:0.05")
    assert len(g) == 9 and g[0] == 0.05 and g[-1] == 0.45
    g = parse_grid("0:1:0.5,0:2:1")
    assert g == [0, 1j, 2j, 0.5, 0.5 + 1j, 0.5 + 2j, 1, 1 + 1j, 1 + 2j]


def test_eval_values(capsys):
    code, out, _ = run(capsys, "eval", "--space", "cycle:10", "--s", "1")
    assert code == 0
    header, row = out.splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert rec["value_re"] == "8.25" and rec["kind"] == "value"
    code, out, _ = run(capsys, "eval", "--space", "padic:2", "--s", "1", "--format", "json")
    assert json.loads(out)["value_re"] == 0.5
    code, out, _ = run(capsys, "eval", "--space", "Z", "--s", "0.25")
    assert float(out.splitlines()[1].split(",")[5]) == pytest.approx(1.1803405990160962, abs=1e-14)


def test_table_rows_and_formats_agree(capsys):
    code, csv_out, _ = run(capsys, "table", "--space", "Z", "--s", "0.05:0.45:0.05", "--threads", "1")
    assert code == 0 and len(csv_out.splitlines()) == 10
    code, json_out, _ = run(capsys, "table", "--space", "Z", "--s", "0.05:0.45:0.05", "--format", "json", "--threads", "4")
    rows = [json.loads(line) for line in json_out.splitlines()]
    keys = csv_out.splitlines()[0].split(",")
    for line, rec in zip(csv_out.splitlines()[1:], rows):
        for k, v in zip(keys, line.split(",")):
            if isinstance(rec[k], float):
                assert float(v) == rec[k]
    assert "\r" not in csv_out


def test_table_pole_row_is_nan(capsys):
    code, out, _ = run(capsys, "table", "--space", "circle", "--s", "0.1:0.9:0.1", "--format", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 9
    assert rows[4]["s_re"] == 0.5 and rows[4]["value_re"] is None


def test_determinism_byte_identical(capsys):
    a = run(capsys, "table", "--space", "Zd:2", "--s", "0.2:0.4:0.1", "--threads", "3")[1]
    b = run(capsys, "table", "--space", "Zd:2", "--s", "0.2:0.4:0.1", "--threads", "1")[1]
    assert a == b


def test_out_file(tmp_path, capsys):
    path = tmp_path / "v.csv"
    code, out, _ = run(capsys, "eval", "--space", "Z", "--s", "0.25", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_bytes().count(b"\n") == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "xi-z", "--tol", "1e-10"],
        ["check", "nilsson", "--p", "2", "--s", "5"],
        ["check", "xi-p", "--p", "7"],
        ["check", "poisson"],
        ["check", "padic-kernels"],
        ["check", "xi-circle"],
        ["check", "strip:tree:2", "--tol", "1e-6"],
    ],
)
def test_checks_pass(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0 and "PASS" in err and "check-report" in out


def test_check_failure_exit_1(capsys):
    assert run(capsys, "check", "xi-z", "--s", "0.3+2i", "--tol", "0")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["experiment", "verlinde", "--g", "2..5", "--m", "1..10"],
        ["experiment", "rh-ratio", "--modulus", "5", "--chi", "2", "--s", "0.5+10i", "--n", "10,100,1000"],
        ["experiment", "logdet-z2", "--n", "16,32,64,128"],
        ["experiment", "catalan", "--n", "30"],
        ["experiment", "spanning-trees", "--n", "3,4,5"],
        ["experiment", "euler", "--m", "2", "--n", "10,100"],
        ["experiment", "cycle-limit", "--s", "0.25", "--n", "10,100"],
    ],
)
def test_experiments_run(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0 and out and err


def test_verlinde_rows(capsys):
    _, out, _ = run(capsys, "experiment", "verlinde", "--g", "2..5", "--m", "1..10", "--format", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 40 and all(r["passed"] for r in rows)


@pytest.mark.parametrize(
    "argv,code",
    [
        (["eval", "--space", "bogus", "--s", "1"], 2),
        (["eval", "--space", "Z", "--s", "1+"], 2),
        (["eval", "--space", "Z"], 2),
        (["frobnicate"], 2),
        (["check", "nope"], 2),
        (["check", "strip:moon"], 2),
        (["experiment", "nope"], 2),
        (["experiment", "verlinde", "--g", "x"], 2),
        (["table", "--space", "Z", "--s", "1:0:0.1"], 2),
        (["eval", "--space", "Z", "--s", "0.5"], 1),
        (["eval", "--space", "padic:2", "--s", "1", "--route", "mellin"], 1),
        (["experiment", "rh-ratio", "--s", "0.5+2i"], 1),
        (["check", "nilsson", "--p", "2", "--s", "3"], 1),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "speczeta", "eval", "--space", "cycle:10", "--s", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and "8.25" in res.stdout
