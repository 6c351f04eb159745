import json
import subprocess
import sys

import pytest

from torusloops.cli import main
from torusloops.sampler import field_from_bits, save_field
from torusloops.torus import TorusDims


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_exact_command(capsys):
    code, out, _ = run_cli(capsys, "exact", "--n", "2", "--m", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["identity_holds"] is True
    assert payload["expectation_two_pow_N"] == {"numerator": 5, "log2_denominator": 1}
    assert payload["sum_two_pow_N"] == 10


def test_exact_cap_refusal(capsys):
    code, _, err = run_cli(capsys, "exact", "--n", "6", "--m", "5")
    assert code == 3
    assert "cap" in err


def test_exact_partial_report_when_only_crsf_feasible(capsys):
    # nm = 18 is over the configuration cap but under the field cap
    code, out, _ = run_cli(capsys, "exact", "--n", "6", "--m", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["z_mnlp"] is None
    assert payload["sum_two_pow_N"] >= 2 ** (18 + 1)


def test_sample_command_with_jsonl(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    code, out, _ = run_cli(
        capsys, "sample", "--n", "4", "--m", "4", "--seed", "8", "--trials", "5",
        "--jsonl", str(path),
    )
    assert code == 0
    assert out.splitlines()[0].startswith("n,m,trials,seed,")
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(records) == 5
    assert [r["trial"] for r in records] == list(range(5))
    assert all(list(r) == ["n", "m", "seed", "trial", "N", "p", "q", "lengths"] for r in records)


def test_sample_exhaustive_bits(capsys):
    code, out, _ = run_cli(
        capsys, "sample", "--n", "2", "--m", "1", "--trials", "1", "--exhaustive-bits"
    )
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row[2] == "4"  # trials = 2^(nm)
    assert row[9] == "2.500000"


def test_sample_trials_zero_is_config_error(capsys):
    code, _, err = run_cli(capsys, "sample", "--n", "4", "--m", "4", "--trials", "0")
    assert code == 2
    assert "trials" in err


def test_scan_m_and_io_error(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    code, _, _ = run_cli(
        capsys, "scan-m", "--n", "8", "--m-from", "8", "--m-to", "10",
        "--trials", "4", "--seed", "2", "--out", str(out),
    )
    assert code == 0
    assert out.read_text().startswith("n,m,trials,seed,")
    code, _, err = run_cli(
        capsys, "scan-m", "--n", "8", "--m-from", "8", "--m-to", "9",
        "--trials", "4", "--out", str(tmp_path / "missing" / "x.csv"),
    )
    assert code == 4
    assert "I/O" in err


def test_scan_c_command(capsys, tmp_path):
    out = tmp_path / "c.csv"
    code, _, _ = run_cli(
        capsys, "scan-c", "--n", "16", "--c-list", "0.0,1.0",
        "--trials", "4", "--seed", "1", "--out", str(out),
    )
    assert code == 0
    header = out.read_text().splitlines()[0]
    assert header.endswith(",C,predicted_count")
    code, _, _ = run_cli(
        capsys, "scan-c", "--n", "16", "--c-list", "nope",
        "--trials", "4", "--out", str(out),
    )
    assert code == 2


def test_cf_command(capsys):
    code, out, _ = run_cli(capsys, "cf", "--n", "1000", "--m", "1618")
    assert code == 0
    payload = json.loads(out)
    assert payload["coefficients"] == [1] * 11 + [5]
    assert payload["j0_class"] == [13, 8]
    assert payload["convergents"][-1] == [809, 500]


def test_predict_command(capsys):
    code, out, _ = run_cli(capsys, "predict", "--n", "1000", "--m", "1618")
    assert code == 0
    payload = json.loads(out)
    assert payload["regime"] == "irrational"
    assert payload["predicted_class"] == [13, 8]
    assert payload["predicted_length"] == 25944.0

    code, out, _ = run_cli(capsys, "predict", "--n", "1024", "--m", "1056")
    assert json.loads(out)["regime"] == "primary_spike"

    code, out, _ = run_cli(capsys, "predict", "--n", "1024", "--m", "1192")
    payload = json.loads(out)
    assert payload["regime"] == "secondary_spike"
    assert abs(payload["deviation_C"] - 1.994) < 2e-3


def test_predict_bad_geometry(capsys):
    code, _, err = run_cli(capsys, "predict", "--n", "10", "--m", "5")
    assert code == 2


def test_render_command(capsys, tmp_path):
    crsf = tmp_path / "f.crsf"
    svg = tmp_path / "f.svg"
    save_field(field_from_bits(TorusDims(3, 2), [0] * 6), crsf)
    code, _, _ = run_cli(capsys, "render", "--field", str(crsf), "--out", str(svg))
    assert code == 0
    assert svg.read_text().startswith('<?xml version="1.0"')


def test_render_missing_field_file(capsys, tmp_path):
    code, _, _ = run_cli(
        capsys, "render", "--field", str(tmp_path / "no.crsf"), "--out", str(tmp_path / "x.svg")
    )
    assert code == 4


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "torusloops.cli", "cf", "--n", "100", "--m", "109"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coefficients"] == [1, 11, 9]
