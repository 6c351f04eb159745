import json
import math

import numpy as np
import pytest

from torusloops.census import find_cycles, jsonl_record
from torusloops.exact import enumerate_crsf
from torusloops.sampler import SampleKey, sample_field
from torusloops.scan import (
    CSV_HEADER,
    ConfigError,
    ScanConfig,
    aggregate_row,
    m_for_c,
    record_line,
    rows_to_csv,
    run_scan,
    run_trials,
)
from torusloops.torus import TorusDims


def test_run_trials_matches_find_cycles():
    for n, m, seed in [(9, 5, 3), (24, 31, 77), (1, 6, 0), (40, 40, 12345)]:
        trials = 32
        n_arr, p_arr, q_arr = run_trials(n, m, seed, trials)
        for t in range(trials):
            census = find_cycles(sample_field(TorusDims(n, m), SampleKey(seed, t)))
            assert n_arr[t] == census.total_cycles
            assert (p_arr[t], q_arr[t]) == (census.homology.p, census.homology.q)


def test_workers_do_not_change_results():
    a = run_trials(33, 47, 9, 101, workers=1)
    b = run_trials(33, 47, 9, 101, workers=4)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_exhaustive_bits_matches_exact_oracle():
    config = ScanConfig(mode="sample", n=2, m=1, trials=4, exhaustive_bits=True)
    (row,) = run_scan(config)
    report = enumerate_crsf(TorusDims(2, 1))
    assert row.trials == 4
    assert row.sum_two_pow_n == report.sum_two_pow_n == 10
    assert row.sum_two_pow_n * 2 == 5 * row.trials  # mean 2^N = 5/2
    assert row.class_counts == {(0, 1): 4, (1, 0): 1}


def test_row_rendering_fixed_columns():
    config = ScanConfig(mode="sample", n=3, m=2, trials=8, seed=5)
    (row,) = run_scan(config)
    csv = rows_to_csv([row])
    lines = csv.splitlines()
    assert lines[0] == CSV_HEADER
    cells = lines[1].split(",")
    assert cells[:4] == ["3", "2", "8", "5"]
    assert len(cells) == 11
    # exact re-rendering of the mean fields
    assert cells[4] == f"{row.sum_n // 8}.{(row.sum_n % 8) * 125000:06d}"


def test_row_invariants_and_class_counts():
    (row,) = run_scan(ScanConfig(mode="sample", n=16, m=16, trials=64, seed=1))
    assert sum(row.class_counts.values()) == row.sum_n
    assert row.sum_two_pow_n >= 2 * row.trials
    assert row.mean_n >= 1
    assert row.max_len >= 1
    assert row.ci95_two_pow_n >= 0


def test_scan_m_rows_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    config = dict(mode="scan_m", n=12, m_from=10, m_to=16, m_step=3, trials=20, seed=3)
    run_scan(ScanConfig(**config, out=str(out1)))
    run_scan(ScanConfig(**config, out=str(out2), workers=4))
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    lines = b1.decode().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + len(range(10, 17, 3))
    assert b"\r" not in b1


def test_scan_c_m_values_and_prediction_column(tmp_path):
    assert m_for_c(1024, 1, 1, 0.0) == 1024
    assert m_for_c(1024, 1, 1, 2.0) == 1192
    out = tmp_path / "c.csv"
    config = ScanConfig(
        mode="scan_C", n=64, p=1, q=1, c_list=(0.0, 1.0), trials=16, seed=9, out=str(out)
    )
    rows = run_scan(config)
    assert [r.m for r in rows] == [m_for_c(64, 1, 1, 0.0), m_for_c(64, 1, 1, 1.0)]
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER + ",C,predicted_count"
    # the Prop-style prediction at C=1, n=1024 is (1/(2 sqrt(pi))) * 1024^(1/4)
    rows_1024 = run_scan(
        ScanConfig(mode="scan_C", n=1024, c_list=(1.0,), trials=1, seed=0)
    )
    assert rows_1024[0].predicted_count == pytest.approx(1.5957, abs=2e-4)


def test_scan_c_extrapolated_c_still_gets_prediction():
    rows = run_scan(ScanConfig(mode="scan_C", n=64, c_list=(2.0,), trials=4, seed=0))
    assert rows[0].predicted_count > 0


def test_sample_jsonl_records_match_census_path(tmp_path):
    path = tmp_path / "records.jsonl"
    config = ScanConfig(
        mode="sample", n=7, m=9, trials=6, seed=21, jsonl_records=str(path)
    )
    run_scan(config)
    lines = path.read_text().splitlines()
    assert len(lines) == 6
    for t, line in enumerate(lines):
        census = find_cycles(sample_field(TorusDims(7, 9), SampleKey(21, t)))
        assert line == jsonl_record(census, seed=21, trial=t)
        assert list(json.loads(line)) == ["n", "m", "seed", "trial", "N", "p", "q", "lengths"]


def test_record_line_format():
    assert (
        record_line(3, 2, 1, 0, 2, 1, 0)
        == '{"n":3,"m":2,"seed":1,"trial":0,"N":2,"p":1,"q":0,"lengths":[3,3]}'
    )


def test_config_errors():
    with pytest.raises(ConfigError):
        run_scan(ScanConfig(mode="sample", n=4, m=4, trials=0))
    with pytest.raises(ConfigError):
        run_scan(ScanConfig(mode="bogus", n=4, m=4))
    with pytest.raises(ConfigError):
        run_scan(ScanConfig(mode="scan_m", n=4, trials=1))
    with pytest.raises(ConfigError):
        run_scan(ScanConfig(mode="scan_C", n=4, c_list=(1.0,), p=2, q=4, trials=1))
    with pytest.raises(ConfigError):
        run_scan(ScanConfig(mode="sample", n=4, m=4, trials=1, workers=0))
    with pytest.raises(ConfigError):
        run_scan(ScanConfig(mode="sample", n=4, m=4, trials=1, fmt="xml"))


def test_jsonl_row_format(tmp_path):
    out = tmp_path / "rows.jsonl"
    run_scan(ScanConfig(mode="sample", n=5, m=5, trials=10, seed=2, out=str(out), fmt="jsonl"))
    obj = json.loads(out.read_text().splitlines()[0])
    assert [obj["n"], obj["m"], obj["trials"], obj["seed"]] == [5, 5, 10, 2]
    assert set(obj) >= set(CSV_HEADER.split(","))


def test_mean_two_pow_n_rendering_is_exact():
    (row,) = run_scan(ScanConfig(mode="sample", n=2, m=1, trials=4, exhaustive_bits=True))
    cells = row.csv_line().split(",")
    assert cells[9] == "2.500000"  # 10/4 exactly


def test_big_n_sum_uses_exact_integers():
    # 2^N sums stay exact well past float precision
    n_arr = np.array([60, 61, 62], dtype=np.int64)
    p_arr = np.array([1, 1, 1], dtype=np.int64)
    q_arr = np.array([1, 1, 1], dtype=np.int64)
    row = aggregate_row(4, 4, 0, n_arr, p_arr, q_arr)
    assert row.sum_two_pow_n == 2**60 + 2**61 + 2**62
    assert row.sum_four_pow_n == 4**60 + 4**61 + 4**62


def test_m_for_c_uses_natural_log():
    # floor(2 * sqrt(1024 * ln 1024)) = 168
    assert m_for_c(1024, 1, 1, 2.0) - 1024 == 168
    assert m_for_c(1024, 1, 1, 2.0) - 1024 == math.floor(2 * math.sqrt(1024 * math.log(1024)))
