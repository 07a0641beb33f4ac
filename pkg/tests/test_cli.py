import csv
import io
import json
import subprocess
import sys

import pytest

from besselhit.cli import run

INPUT_FLAGS = ("nu", "a", "b", "t", "method", "precision", "order", "seed", "paths", "step", "streams")


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_closed_form_json(capsys):
    code, out, _ = call(capsys, "tail", "--nu", "0.5", "--a", "2", "--b", "1", "--t", "10",
                        "--method", "closed-form", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["value"] == pytest.approx(0.1240852, abs=1e-7)
    assert rec["err"] == 0
    assert rec["survival"] == pytest.approx(0.5 + rec["value"])
    assert (rec["nu"], rec["a"], rec["b"], rec["t"], rec["method"]) == (0.5, 2, 1, 10, "closed-form")


def test_asymptotic_csv(capsys):
    code, out, _ = call(capsys, "tail", "--nu", "0.5", "--a", "2", "--b", "1", "--t", "10",
                        "--method", "asymptotic")
    assert code == 0
    (row,) = csv_rows(out)
    assert float(row["value"]) == pytest.approx(0.1261566, abs=1e-7)


def test_grid_rows(capsys):
    code, out, _ = call(capsys, "tail", "--nu", "1.5", "--a", "2", "--b", "1", "--t-grid", "1:1000:7-log")
    assert code == 0
    rows = csv_rows(out)
    ts = [float(r["t"]) for r in rows]
    assert len(rows) == 7 and all(x < y for x, y in zip(ts, ts[1:]))


def test_json_list_for_grid(capsys):
    _, out, _ = call(capsys, "asymptote", "--nu", "1", "--a", "2", "--b", "1", "--t-grid", "10:100:3-log",
                     "--format", "json")
    data = json.loads(out)
    assert isinstance(data, list) and len(data) == 3


def test_seventeen_digits(capsys):
    _, out, _ = call(capsys, "tail", "--nu", "0.5", "--a", "2", "--b", "1", "--t", "0.1",
                     "--method", "closed-form")
    (row,) = csv_rows(out)
    assert row["t"] == "0.10000000000000001"


@pytest.mark.parametrize("method,extra", [
    ("inversion", ()),
    ("closed-form", ()),
    ("asymptotic", ()),
    ("mc-lemma22", ("--paths", "2000", "--seed", "9")),
])
def test_round_trip(capsys, method, extra):
    code, out, _ = call(capsys, "tail", "--nu", "0.5", "--a", "2", "--b", "1", "--t-grid", "1:30:3-log",
                        "--method", method, *extra)
    assert code == 0
    for row in csv_rows(out):
        argv = ["tail"]
        for key in INPUT_FLAGS:
            if key in row:
                argv += ["--" + key, row[key]]
        if row.get("bridge") == "false":
            argv.append("--no-bridge")
        code, again, _ = call(capsys, *argv)
        assert code == 0
        (row2,) = csv_rows(again)
        assert row2 == row


def test_config_file_and_override(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"nu": 0.5, "a": 2, "b": 1, "t": 10, "method": "closed-form"}))
    code, out, _ = call(capsys, "tail", "--config", str(conf), "--format", "json")
    assert code == 0 and json.loads(out)["t"] == 10
    code, out, _ = call(capsys, "tail", "--config", str(conf), "--t", "20", "--format", "json")
    assert code == 0 and json.loads(out)["t"] == 20


def test_config_unknown_key(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"nu": 0.5, "colour": "red"}))
    code, _, err = call(capsys, "tail", "--config", str(conf))
    assert code == 2 and "colour" in err


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "out.csv"
    code, out, _ = call(capsys, "moment", "--nu", "1", "--a", "1", "--p", "1", "--t", "2", "--output", str(dest))
    assert code == 0 and out == ""
    (row,) = csv_rows(dest.read_text())
    assert float(row["value"]) == pytest.approx(0.22119921692859512, rel=1e-14)


def test_all_subcommands(capsys):
    base = ("--nu", "0.5", "--a", "2", "--b", "1")
    cmds = [
        ("tail", *base, "--t", "3"),
        ("density", *base, "--t", "1"),
        ("cdf", *base, "--t", "1"),
        ("laplace", *base, "--lam", "0.5"),
        ("moment", "--nu", "1", "--a", "1", "--p", "0.5", "--t", "3"),
        ("simulate", *base, "--t", "2", "--paths", "500"),
        ("asymptote", *base, "--t", "100"),
        ("verify-slope", *base, "--t-grid", "100:1000:4-log"),
        ("verify-constant", *base, "--t", "10000"),
        ("verify-moment", "--nu", "1", "--a", "1", "--p", "1"),
    ]
    for argv in cmds:
        code, out, err = call(capsys, *argv)
        assert code == 0, (argv, err)
        assert csv_rows(out)


def test_verify_rows_carry_verdict(capsys):
    _, out, _ = call(capsys, "verify-moment", "--nu", "1", "--a", "1", "--p", "1")
    rows = csv_rows(out)
    assert len(rows) == 4 and {r["passed"] for r in rows} == {"true"}


@pytest.mark.parametrize("argv,needle", [
    (("moment", "--nu", "1", "--a", "1", "--p", "0.0", "--t", "1"), "p must be > 0"),
    (("tail", "--nu", "0.5", "--a", "1", "--b", "2", "--t", "1"), "downward case"),
    (("tail", "--nu", "1.5", "--a", "2", "--b", "1", "--t", "1", "--method", "closed-form"), "1/2"),
    (("tail", "--nu", "0.5", "--a", "2", "--b", "1"), "--t"),
    (("tail", "--nu", "0.5", "--a", "2", "--b", "1", "--t", "1", "--bogus"), "unrecognized"),
    (("tail", "--nu", "0.5", "--a", "2", "--b", "1", "--t-grid", "nonsense"), "grid"),
    (("frobnicate",), "invalid choice"),
])
def test_exit_2(capsys, argv, needle):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == ""
    assert needle in err
    assert len(err.strip().splitlines()) == 1 or "usage" in err


def test_exit_3(capsys):
    code, out, err = call(capsys, "tail", "--nu", "3", "--a", "2", "--b", "1", "--t", "1e9",
                          "--precision", "double")
    assert code == 3 and out == "" and "instability" in err


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "besselhit", "asymptote", "--nu", "0", "--a", "2.718281828459045",
                          "--b", "1", "--t", "22026.465794806718", "--format", "json"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["value"] == pytest.approx(0.2)
