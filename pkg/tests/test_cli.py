import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from ftlab import cli

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_golden_habiro_dump(capsys):
    code, out, _ = run(capsys, "eval", "habiro", "--p", "1", "--k", "2", "--order", "12")
    assert code == 0
    assert out == (GOLDEN / "habiro_p1_k2_order12.txt").read_text()


def test_golden_eta_dump(capsys):
    code, out, _ = run(capsys, "eval", "eta", "--order", "5")
    assert code == 0
    assert out == (GOLDEN / "eta_order5.txt").read_text()


def test_dump_roundtrip(capsys):
    from ftlab.hecke import habiro_series
    from ftlab.qseries import loads
    _, out, _ = run(capsys, "eval", "habiro", "--p", "2", "--k", "3", "--order", "20")
    assert loads(out) == habiro_series(2, 3, 20)


def test_eval_root(capsys):
    code, out, _ = run(capsys, "eval", "habiro", "--p", "1", "--k", "2", "--root", "2")
    assert code == 0 and out.strip() == "-1"


@pytest.mark.parametrize("argv", [
    ["eval", "phi", "--order", "2"],
    ["eval", "falsetheta1d", "--M", "12", "--mu", "1", "--order", "3"],
    ["eval", "falsetheta2d", "--p", "1", "--m1", "1", "--m2", "1", "--c", "1", "--order", "3"],
    ["eval", "falsetheta1d", "--M", "12", "--mu", "1", "--tau", "0.1+0.5i"],
])
def test_eval_objects(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip()


@pytest.mark.parametrize("argv", [
    ["verify", "hecke", "--p", "2", "--k", "3", "--order", "60"],
    ["verify", "decomposition", "--p", "1", "--m1", "1", "--m2", "1", "--c", "1", "--order", "8"],
    ["verify", "rr", "--order", "100"],
    ["verify", "bailey", "--p", "1,2", "--order", "30", "--n", "4"],
    ["verify", "fine", "--c-list", "0..2", "--order", "30"],
    ["verify", "habiro-false", "--p", "1", "--order", "15"],
    ["verify", "s1d", "--digits", "20"],
])
def test_verify_passes(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert out.rstrip().endswith("PASSED")


def test_verify_habiro_false_marks_excluded(capsys):
    code, out, _ = run(capsys, "verify", "habiro-false", "--p", "1", "--k", "1", "--order", "10",
                       "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert report["checks"][0]["status"] == "EXCLUDED"
    assert report["checks"][0]["detail"]["first_difference"] is not None


def test_verify_failure_exit_code(capsys):
    # the sum formula at a small cutoff misses the tolerance and reports its defect
    code, out, _ = run(capsys, "verify", "mzv", "--cutoff", "100", "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["passed"] is False
    assert report["first_failure"]["name"] == "sum-formula"
    assert report["first_failure"]["detail"]["defect"] > 1e-3


def test_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "rr", "--order", "20", "--format", "json")
    report = json.loads(out)
    assert set(report) == {"schema", "version", "command", "target", "passed", "checks", "first_failure"}
    assert report["schema"] == "ftlab.report/1" and report["target"] == "rr"
    for c in report["checks"]:
        assert set(c) == {"name", "params", "status", "detail"}
        assert c["status"] in ("PASS", "FAIL", "CONJECTURE", "EXCLUDED")


def test_limits_single_row(capsys):
    code, out, _ = run(capsys, "limits", "--p", "1", "--k", "2", "--N", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) == 1
    row = data["rows"][0]
    assert row["status"] == "THEOREM" and row["abs_diff"] < 1e-8


def test_limits_csv_file(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, _, _ = run(capsys, "limits", "--p", "1,2", "--k", "1..5", "--N", "1..3", "--digits", "30",
                     "--out", str(target))
    assert code == 0
    rows = list(csv.reader(target.open()))
    assert rows[0] == ["N", "p", "k", "re_value", "im_value", "re_limit", "im_limit", "abs_diff", "status"]
    assert len(rows) == 1 + 2 * 5 * 3
    statuses = {(r[1], r[2]): r[-1] for r in rows[1:]}
    assert statuses[("1", "1")] == "EXCLUDED" and statuses[("2", "2")] == "CONJECTURE"
    # rows come out in a fixed order: N, then p, then k
    keys = [(int(r[0]), int(r[1]), int(r[2])) for r in rows[1:]]
    assert keys == sorted(keys)


def test_limits_text(capsys):
    code, out, _ = run(capsys, "limits", "--p", "2", "--k", "1", "--N", "3")
    assert code == 0 and "THEOREM" in out


@pytest.mark.parametrize("argv", [
    ["verify", "hecke", "--p", "0"],
    ["verify", "nonsense"],
    ["verify", "hecke", "--order", "-3"],
    ["eval", "habiro", "--digits", "5", "--root", "3"],
    ["limits", "--N", "a..b"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_int_list():
    assert cli.int_list("1..3,7") == [1, 2, 3, 7]
    assert cli.int_list("5") == [5]


def test_env_digits(monkeypatch):
    monkeypatch.setenv("FT_LAB_DIGITS", "33")
    ns = cli.build_parser().parse_args(["eval", "habiro", "--root", "3"])
    assert cli._digits(ns) == 33


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ftlab", "eval", "habiro", "--p", "1", "--k", "2",
                           "--root", "1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
