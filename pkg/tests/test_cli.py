import csv
import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from lauricella.cli import REPORT_KEYS, main, parse_report, run


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report_of(capsys, *argv):
    code, out, _ = invoke(capsys, *argv)
    return code, json.loads(out)


def test_eval_fa_example(capsys):
    code, rep = report_of(capsys, "eval-fa", "--n", "1", "--a", "1", "--b", "1", "--c", "2",
                          "--z", "0.5")
    assert code == 0 and rep["status"] == "ok"
    assert rep["value"] == pytest.approx(2 * math.log(2), rel=1e-12)
    assert list(rep)[:6] == list(REPORT_KEYS[:6])


def test_domain_violation_is_input_error(capsys):
    code, out, err = invoke(capsys, "eval-fa", "--z", "0.6,0.6")
    assert code == 1 and out == ""
    assert "sum |z_i| < 1" in err


def test_verify_lemma2_example(capsys):
    code, rep = report_of(capsys, "verify-lemma2", "--n", "2", "--a", "3", "--b", "0.5,1")
    assert code == 0 and rep["status"] == "pass"
    assert rep["rhs"] == pytest.approx(4 / 3, rel=1e-14)
    assert rep["lhs"] == pytest.approx(4 / 3, rel=1e-3)
    assert rep["inputs"]["max_weight"] == 80
    assert set(REPORT_KEYS) <= set(rep)


def test_failed_identity_exit_code(capsys):
    # t = 2^0 = 1 is nowhere near the limit
    code, rep = report_of(capsys, "verify-lemma3", "--a", "3", "--b", "0.5,0.5",
                          "--c", "1.5,2", "--j", "0")
    assert code == 2 and rep["status"] == "fail"


@pytest.mark.parametrize("argv", [
    ("eval-2f1", "--c", "0"),
    ("eval-2f1", "--a", "abc"),
    ("eval-fa", "--b", "1,2,3", "--z", "0.1,0.1"),
    ("verify-lemma2", "--a", "1", "--b", "0.5,0.6"),
    ("eval-q", "--m", "3", "--alpha", "0.25", "--x=-1,1,1"),
    ("residual", "--m", "3", "--alpha", "0.25", "--order", "3"),
])
def test_input_errors(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_csv_and_plain_formats(capsys):
    code, out, _ = invoke(capsys, "eval-2f1", "--a", "1", "--b", "1", "--c", "2", "--z", "0.5",
                          "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == list(REPORT_KEYS)
    row = dict(zip(rows[0], rows[1]))
    assert row["lhs"] == "" and row["status"] == "ok"
    assert json.loads(row["inputs"])["z"] == 0.5
    code, out, _ = invoke(capsys, "eval-2f1", "--z", "0.5", "--format", "plain")
    assert out.splitlines()[0] == "command: eval-2f1"


@pytest.mark.parametrize("argv", [
    ("residual", "--m", "3", "--n", "1", "--alpha", "0.25"),
    ("verify-lemma1", "--trials", "2"),
])
def test_csv_cells_are_plain_numbers(capsys, argv):
    _, out, _ = invoke(capsys, *argv, "--format", "csv")
    row = dict(zip(*csv.reader(io.StringIO(out))))
    assert math.isfinite(float(row["gap"])) and float(row["tolerance"]) > 0
    assert "np." not in out


def test_config_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for a sweep\na = 2\nb=1\nc = 2\nz=0.25\nmax-weight = 300\n")
    monkeypatch.setenv("LAURICELLA_CONFIG", str(cfg))
    _, rep = report_of(capsys, "eval-2f1")
    assert rep["inputs"]["a"] == 2.0 and rep["inputs"]["max_weight"] == 300
    _, rep = report_of(capsys, "eval-2f1", "--a", "3")
    assert rep["inputs"]["a"] == 3.0 and rep["inputs"]["z"] == 0.25
    cfg.write_text("bogus = 1\n")
    code, _, err = invoke(capsys, "eval-2f1")
    assert code == 1 and "bogus" in err


def test_timing_is_opt_in(capsys):
    _, rep = report_of(capsys, "eval-2f1", "--z", "0.3")
    assert "wall_time" not in rep
    _, rep = report_of(capsys, "eval-2f1", "--z", "0.3", "--timing")
    assert rep["wall_time"] >= 0


COMMAND_LINES = [
    ("eval-2f1", "--a", "0.3", "--b", "0.7", "--c", "1.5", "--z", "-3"),
    ("eval-fa", "--a", "1.1", "--b", "0.25,0.35,0.15", "--c", "0.9,1.4,2", "--z", "0.1",
     "--n", "3", "--method", "decomposed"),
    ("verify-lemma1", "--n", "2", "--trials", "3", "--seed", "5"),
    ("verify-lemma2", "--a", "6", "--b", "0.5,0.5,1"),
    ("verify-lemma3", "--a", "2", "--b", "0.5", "--c", "1.5", "--j", "6"),
    ("eval-q", "--m", "3", "--alpha", "0.25", "--k", "1", "--x", "1,1,1", "--xi", "2,1.5,0.5"),
    ("residual", "--m", "3", "--alpha", "0.25", "--x", "1,1,1", "--xi", "2,1.5,0.5"),
]


@pytest.mark.parametrize("argv", COMMAND_LINES, ids=lambda a: a[0])
def test_round_trip_and_determinism(capsys, argv):
    code1, out1, _ = invoke(capsys, *argv)
    code2, out2, _ = invoke(capsys, *argv)
    assert out1 == out2 and code1 == code2
    cfg, rep = parse_report(out1)
    assert json.dumps(run(cfg)) + "\n" == out1
    assert rep["command"] == argv[0]


@settings(max_examples=25)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 4), st.floats(-5, 0.95),
       st.integers(0, 1000))
def test_round_trip_property(a, b, c, z, seed):
    # the --key=value form keeps negative numbers away from option parsing
    argv = ["eval-2f1", f"--a={a!r}", f"--b={b!r}", f"--c={c!r}", f"--z={z!r}", f"--seed={seed}"]
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        main(argv)
    finally:
        sys.stdout = old
    out = buf.getvalue()
    cfg, rep = parse_report(out)
    assert cfg.params == {"a": a, "b": b, "c": c, "z": z} and cfg.seed == seed
    assert json.dumps(run(cfg)) + "\n" == out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lauricella.cli", "eval-2f1", "--z", "0.5",
                           "--a", "1", "--b", "1", "--c", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["converged"] is True
