import csv
import io
import json
import shutil
import subprocess
import sys

import jsonschema
import pytest

from dtlab import cli
from dtlab.golden import default_dir


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_no_arguments_prints_usage(capsys):
    code, _, err = run([], capsys)
    assert code == 1 and "usage" in err


@pytest.mark.parametrize("argv", [
    ["eta"], ["eta", "--k", "twelve"], ["eta", "--k", "12", "--bogus"], ["nonsense"],
    ["eta", "--k", "1"], ["tuple-max", "--p", "13", "--d", "5", "--lambda", "1"],
    ["field-info", "--p", "6"], ["golden-check", "--table", "table9"],
    ["stepanov-verify", "--p", "13", "--d", "2", "--lambda", "1", "--set", "1,2"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert run(argv, capsys)[0] == 1


def test_eta_output(capsys):
    code, out, _ = run(["eta", "--k", "12"], capsys)
    assert code == 0
    assert "nu_k=1.1033" in out.splitlines()


def test_field_info(capsys):
    code, out, _ = run(["field-info", "--p", "3", "--r", "2"], capsys)
    assert code == 0 and "modulus=1,0,1" in out and "generator=4" in out
    code, out, _ = run(["field-info", "--p", "13"], capsys)
    assert "generator=2" in out and "modulus=0,1" in out


def test_tuple_max_and_sweep(capsys, tmp_path):
    code, out, _ = run(["tuple-max", "--p", "3", "--r", "2", "--d", "2", "--lambda", "1", "--strong"], capsys)
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 0 and row["value"] == "2" and row["exact_matched"] == "True"
    target = tmp_path / "sub" / "sweep.csv"
    code, out, _ = run(["tuple-sweep", "--q-max", "30", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert rows and all(r["holds"] == "True" for r in rows)
    assert b"\r" not in target.read_bytes()


DECOMPOSE_SCHEMA = {
    "type": "object",
    "required": ["q", "d", "lambda", "target", "exists", "search_complete", "pairs"],
    "properties": {
        "exists": {"type": "boolean"},
        "search_complete": {"type": "boolean"},
        "target": {"type": "array", "items": {"type": "integer"}},
        "pairs": {"type": "array", "items": {
            "type": "object", "required": ["A", "B", "sidon"],
            "properties": {"A": {"type": "array", "items": {"type": "integer"}},
                           "B": {"type": "array", "items": {"type": "integer"}},
                           "sidon": {"type": "boolean"}}}},
    },
}

INT_TUPLE_SCHEMA = {
    "type": "object",
    "required": ["k", "n", "N", "strong", "size", "witness"],
    "properties": {"size": {"type": "integer", "minimum": 0},
                   "witness": {"type": "array", "items": {"type": "integer", "minimum": 1}}},
}


def test_decompose_json(capsys):
    code, out, _ = run(["decompose", "--p", "13", "--d", "2", "--lambda", "1", "--ternary"], capsys)
    data = json.loads(out)
    jsonschema.validate(data, DECOMPOSE_SCHEMA)
    assert code == 0 and data["target"] == [2, 3, 8, 9, 11] and not data["exists"]
    assert data["sidon_audit"] and not data["ternary"]["exists"]
    assert json.dumps(data, indent=2, sort_keys=True) + "\n" == out


def test_int_tuple_json(capsys):
    code, out, _ = run(["int-tuple", "--k", "2", "--n", "1", "--N", "120"], capsys)
    data = json.loads(out)
    jsonschema.validate(data, INT_TUPLE_SCHEMA)
    assert code == 0 and data["size"] == 4 and data["witness"] == [1, 3, 8, 120]


def test_stepanov_verify(capsys):
    argv = ["stepanov-verify", "--p", "13", "--d", "2", "--lambda", "1", "--set", "3,4", "--set", "3,4"]
    code, out, _ = run(argv, capsys)
    assert code == 0 and json.loads(out)["bound_holds"]


def test_charsum_verify_is_seeded(capsys):
    argv = ["charsum-verify", "--q", "9", "--d", "2", "--trials", "5"]
    code, first, _ = run(argv, capsys)
    assert code == 0
    assert run(argv, capsys)[1] == first
    assert run(argv + ["--seed", "7"], capsys)[1] != first


def test_gallagher_cli(capsys, tmp_path):
    path = tmp_path / "squares.txt"
    path.write_text(" ".join(str(i * i) for i in range(1, 101)))
    code, out, _ = run(["gallagher", "--set", str(path), "--primes-mod", "1,4", "--Q", "10000",
                        "--N", "10000"], capsys)
    data = json.loads(out)
    assert code == 0 and data["valid"] and data["bound"] >= 100
    code, out, _ = run(["gallagher", "--set", str(path), "--primes-mod", "1,4", "--Q", "1000",
                        "--N", "10000"], capsys)
    assert code == 0 and json.loads(out)["bound"] is None


def test_sieve_table_and_figure(capsys):
    code, out, _ = run(["sieve-table", "--k-min", "2", "--k-max", "12"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["nu_k"] == "2.6071" and rows[-1]["nu_k"] == "1.1033"
    code, out, _ = run(["figure-data", "--k-max", "1000"], capsys)
    assert len(out.splitlines()) == 1000


def test_empty_rows_give_header_only():
    assert cli.to_csv([], ["a", "b"]) == "a,b\n"


def test_output_independent_of_threads(capsys, tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "2"):
        monkeypatch.setenv("DTLAB_THREADS", threads)
        target = tmp_path / f"t{threads}.csv"
        assert run(["sieve-table", "--k-max", "45000", "--k-min", "44900", "--out", str(target)], capsys)[0] == 0
        outs.append(target.read_bytes())
        target2 = tmp_path / f"s{threads}.csv"
        run(["tuple-sweep", "--q-max", "40", "--threads", threads, "--out", str(target2)], capsys)
        outs.append(target2.read_bytes())
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# tuple query\np = 3\nr = 2\nd = 2\nlambda = 1\nstrong = yes\n")
    code, out, _ = run(["tuple-max", "--config", str(cfg)], capsys)
    assert code == 0 and next(csv.DictReader(io.StringIO(out)))["strong"] == "True"
    # command line beats the file
    code, out, _ = run(["tuple-max", "--config", str(cfg), "--p", "13", "--r", "1"], capsys)
    assert next(csv.DictReader(io.StringIO(out)))["q"] == "13"
    cfg.write_text("colour = blue\n")
    assert run(["tuple-max", "--config", str(cfg)], capsys)[0] == 1
    cfg.write_text("just words\n")
    assert run(["eta", "--config", str(cfg)], capsys)[0] == 1


def test_golden_check_passes(capsys):
    code, out, _ = run(["golden-check", "--table", "appendix", "--k-max", "201"], capsys)
    assert code == 0 and out.startswith("appendix: 200 rows, 0 diffs")
    code, out, _ = run(["golden-check", "--table", "running-min", "--k-max", "2000"], capsys)
    assert code == 0


def test_golden_check_detects_corruption(capsys, tmp_path):
    work = tmp_path / "golden"
    shutil.copytree(default_dir(), work)
    path = work / "nu_values.csv"
    lines = path.read_text().splitlines()
    lines[11] = lines[11].split(",")[0] + ",9.9999"  # k = 12
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(["golden-check", "--table", "appendix", "--k-max", "20", "--golden-dir", str(work)], capsys)
    assert code == 2
    assert "checksum mismatch for nu_values.csv" in out and "k=12" in out


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "dtlab.cli", "eta", "--k", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "nu_k=2.6071" in proc.stdout
