import io
import json
import subprocess
import sys

import pytest

from qeclab.cli import main, parse_range
from qeclab.codes import build_named_code
from qeclab.montecarlo import curves_from_rows, estimate_threshold, read_csv

SWEEP = ["sweep", "--family", "toric", "--L", "4,6", "--decoder", "mwpm", "--p", "0.08:0.14:3",
         "--q", "0", "--trials", "600", "--seed", "7"]


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_codes_show_surface3():
    code, text = run(["codes", "show", "--family", "surface", "--L", "3"])
    assert code == 0
    assert "[[13,1,3]]" in text.splitlines()[0]
    assert text.splitlines()[1] == "13 1 surface L=3"


def test_codes_list_validate_distance():
    code, text = run(["codes", "list"])
    assert code == 0 and "bacon_shor" in text and "toric" in text
    assert run(["codes", "validate", "--family", "steane7"])[0] == 0
    code, text = run(["codes", "distance", "--family", "c6c4"])
    assert code == 0 and "[[12,2,4]]" in text


def test_codes_show_json_and_file_round_trip(tmp_path):
    code, text = run(["codes", "show", "--family", "five_one_three", "--format", "json"])
    doc = json.loads(text)
    assert (doc["n"], doc["k"], doc["d"]) == (5, 1, "3")
    path = tmp_path / "c.txt"
    path.write_text(doc["entry"])
    code, text = run(["codes", "distance", "--file", str(path)])
    assert code == 0 and "[[5,1,3]]" in text


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["codes"],
    ["codes", "show"],
    ["codes", "show", "--family", "no_such_code"],
    ["codes", "show", "--family", "surface", "--L", "3", "--colour", "red"],
    ["sweep", "--family", "toric", "--L", "4", "--decoder", "mwpm", "--p", "0.1", "--trials", "10"],
    ["sweep", "--family", "toric", "--L", "4", "--decoder", "mwpm", "--p", "0.1:0.2", "--trials", "10",
     "--seed", "1"],
    ["sweep", "--family", "toric", "--L", "4", "--decoder", "mwpm", "--p", "1.5", "--trials", "10",
     "--seed", "1"],
    ["circuit", "run", "--circuit", "H 0"],
    ["decode", "--family", "shor9"],
])
def test_usage_errors_exit_1(argv, capsys):
    code, _ = run(argv)
    assert code == 1
    assert capsys.readouterr().err.startswith("usage: qeclab")


def test_usage_error_prints_synopsis(capsys):
    run(["sweep", "--family", "toric"])
    assert capsys.readouterr().err.startswith("usage: qeclab sweep")


def test_runtime_errors_exit_2(capsys):
    assert run(["decode", "--family", "shor9", "--syndrome", "1"])[0] == 2
    assert run(["sweep", "--family", "toric", "--L", "8", "--decoder", "ml", "--p", "0.1",
                "--trials", "5", "--seed", "1"])[0] == 2
    assert "qeclab:" in capsys.readouterr().err


def test_parse_range():
    assert parse_range("0.09:0.12:7") == pytest.approx([0.09, 0.095, 0.1, 0.105, 0.11, 0.115, 0.12])
    assert parse_range("8,12,16", int) == [8, 12, 16]
    assert parse_range("0.1") == [0.1]


def test_decode_syndrome_and_expect(capsys):
    code, text = run(["decode", "--family", "shor9", "--decoder", "minweight", "--syndrome", "10000000",
                      "--format", "json"])
    doc = json.loads(text)
    assert code == 0 and doc["correction"] == "ZIIIIIIII" and not doc["failed"]
    args = ["decode", "--family", "shor9", "--decoder", "minweight", "--syndrome", "10000000", "--expect"]
    assert run(args + [doc["class"]])[0] == 0
    assert run(args + ["nonsense"])[0] == 2


def test_decode_record_file_and_fixture(tmp_path):
    code = build_named_code("toric", L=4)
    m = len(code.checks)
    z_check = int(code.check_indices("Z")[0])
    # A measurement flip on one check in round 0: two events in time, no data correction.
    rec = tmp_path / "rec.txt"
    rec.write_text(f"3 {m}\n0 {z_check}\n1 {z_check}\n")
    status, text = run(["decode", "--family", "toric", "--L", "4", "--record", str(rec), "--p", "0.05",
                        "--q", "0.05"])
    assert status == 0
    assert "correction " + "I" * code.n in text
    fx = tmp_path / "fx.json"
    fx.write_text(json.dumps({"family": "toric", "params": {"L": 4}, "noise": "bitflip", "p": 0.05, "q": 0.05,
                              "decoder": "mwpm", "record": rec.read_text(), "expected_class": "I"}))
    assert run(["decode", "--fixture", str(fx)])[0] == 0


def test_sweep_csv_rows_and_threshold_round_trip(tmp_path):
    code, text = run(SWEEP)
    assert code == 0
    rows = read_csv(text)
    assert [(r["params"], r["p"]) for r in rows] == [
        (f"L={L}", p) for L in (4, 6) for p in ("0.08", "0.11", "0.14")]
    assert all(r["trials"] == "600" and r["seed"] == "7" and r["wall_time_s"] == "" for r in rows)
    path = tmp_path / "s.csv"
    path.write_text(text)
    status, out = run(["threshold", str(path), "--format", "json"])
    assert status == 0
    expected = estimate_threshold(curves_from_rows(rows))
    assert json.loads(out)["p_c"] == pytest.approx(expected.p_c)
    status, out = run(["threshold", str(path), "--pseudo"])
    assert status == 0 and out.startswith("p_c = ")


def test_sweep_byte_identical_across_jobs(tmp_path, monkeypatch):
    _, one = run(SWEEP + ["--jobs", "1"])
    _, two = run(SWEEP + ["--jobs", "2"])
    monkeypatch.setenv("QECLAB_JOBS", "2")
    out = tmp_path / "env.csv"
    assert run(SWEEP + ["--out", str(out)]) == (0, "")
    assert one == two == out.read_text()


def test_sweep_rounds_follow_lattice_size():
    code, text = run(["sweep", "--family", "toric", "--L", "3", "--decoder", "mwpm", "--p", "0.02", "--q",
                      "0.02", "--rounds", "L", "--trials", "20", "--seed", "1", "--timing"])
    rows = read_csv(text)
    assert code == 0 and rows[0]["R"] == "3" and float(rows[0]["wall_time_s"]) >= 0


def test_sweep_human_and_json_formats():
    args = ["sweep", "--family", "repetition", "--n", "3", "--decoder", "minweight", "--p", "0.1",
            "--trials", "50", "--seed", "2"]
    code, text = run(args + ["--format", "human"])
    assert code == 0 and text.splitlines()[0].split()[0] == "family"
    code, text = run(args + ["--format", "json"])
    assert json.loads(text)["rows"][0]["stats"]["trials"] == 50


def test_circuit_run_bell_pair():
    for seed in range(4):
        code, text = run(["circuit", "run", "--circuit", "H 0;CNOT 0 1;MEAS ZI;MEAS IZ", "--seed", str(seed)])
        a, b = text.split()[1:3]
        assert code == 0 and a == b


def test_circuit_run_file_and_state(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("H 0\nCNOT 0 1\n")
    code, text = run(["circuit", "run", "--file", str(path), "--seed", "0", "--show-state"])
    assert code == 0
    assert text.splitlines() == ["outcomes ", "XX", "ZZ"]


def test_version_and_help():
    assert run(["--version"])[0] == 0
    assert run(["--help"])[0] == 0


@pytest.mark.parametrize("argv,status", [(["codes", "list"], 0), (["bogus"], 1),
                                         (["decode", "--family", "shor9", "--syndrome", "1"], 2)])
def test_process_exit_status(argv, status):
    proc = subprocess.run([sys.executable, "-m", "qeclab", *argv], capture_output=True, text=True)
    assert proc.returncode == status
    assert bool(proc.stderr) == (status != 0)
