"""Monte Carlo sweep harness: trials, exact-integer aggregation, file output.

Trials are keyed (seed, trial) so any execution order or worker count gives
identical results; all accumulators are exact integers (counts, total
lengths, sums of 2^N and 4^N), converted to decimal strings only at
emission. 2^N near a spike exceeds any fixed-width float, hence the big-int
discipline. Rows render byte-identically across runs and worker counts.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .census import exact_div_str
from .exact import DEFAULT_FIELD_CAP, CapExceededError
from .torus import StructureError, TorusDims

CSV_HEADER = "n,m,trials,seed,mean_N,sd_N,classes,mean_len,max_len,mean_2powN,ci95_2powN"
SCAN_C_HEADER = CSV_HEADER + ",C,predicted_count"


class ConfigError(ValueError):
    """Invalid scan configuration."""


@dataclass(frozen=True)
class ScanConfig:
    mode: str  # sample | scan_m | scan_C
    n: int
    m: int | None = None
    m_from: int | None = None
    m_to: int | None = None
    m_step: int = 1
    p: int = 1
    q: int = 1
    c_list: tuple[float, ...] = ()
    trials: int = 1
    seed: int = 0
    workers: int = 1
    out: str | None = None
    fmt: str = "csv"
    exhaustive_bits: bool = False
    jsonl_records: str | None = None

    def validate(self) -> None:
        if self.mode not in ("sample", "scan_m", "scan_C"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n}")
        if self.trials < 1 and not self.exhaustive_bits:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.fmt not in ("csv", "jsonl"):
            raise ConfigError(f"format must be csv or jsonl, got {self.fmt!r}")
        if self.mode == "sample" and self.m is None:
            raise ConfigError("sample mode needs m")
        if self.mode == "scan_m" and (self.m_from is None or self.m_to is None):
            raise ConfigError("scan_m mode needs m_from and m_to")
        if self.mode == "scan_m" and self.m_step < 1:
            raise ConfigError(f"m step must be >= 1, got {self.m_step}")
        if self.mode == "scan_C":
            if not self.c_list:
                raise ConfigError("scan_C mode needs a nonempty C list")
            if self.p < 1 or self.q < 1 or math.gcd(self.p, self.q) != 1:
                raise ConfigError(f"(p, q) must be coprime positive, got ({self.p}, {self.q})")


@dataclass(frozen=True)
class ScanRow:
    n: int
    m: int
    trials: int
    seed: int
    sum_n: int
    sum_n_sq: int
    class_counts: dict[tuple[int, int], int]  # (p, q) -> cycles observed
    sum_len: int  # over all cycles in all trials
    max_len: int
    sum_two_pow_n: int
    sum_four_pow_n: int
    c_value: float | None = None
    predicted_count: float | None = None

    @property
    def mean_n(self) -> float:
        return self.sum_n / self.trials

    @property
    def sd_n(self) -> float:
        if self.trials < 2:
            return 0.0
        var_num = self.trials * self.sum_n_sq - self.sum_n * self.sum_n
        return math.sqrt(max(var_num, 0) / (self.trials * (self.trials - 1)))

    @property
    def ci95_two_pow_n(self) -> float:
        if self.trials < 2:
            return 0.0
        var_num = self.trials * self.sum_four_pow_n - self.sum_two_pow_n**2
        try:
            var = float(var_num) / (self.trials * (self.trials - 1))
        except OverflowError:
            return math.inf
        return 1.96 * math.sqrt(max(var, 0.0) / self.trials)

    def classes_str(self) -> str:
        parts = [f"{p}:{q}:{c}" for (p, q), c in sorted(self.class_counts.items())]
        return ";".join(parts)

    def _cells(self) -> list[str]:
        return [
            str(self.n),
            str(self.m),
            str(self.trials),
            str(self.seed),
            exact_div_str(self.sum_n, self.trials),
            f"{self.sd_n:.6f}",
            self.classes_str(),
            exact_div_str(self.sum_len, self.sum_n),
            str(self.max_len),
            exact_div_str(self.sum_two_pow_n, self.trials),
            f"{self.ci95_two_pow_n:.6f}",
        ]

    def csv_line(self) -> str:
        cells = self._cells()
        if self.c_value is not None:
            cells += [f"{self.c_value:g}", f"{self.predicted_count:.6f}"]
        return ",".join(cells)

    def json_obj(self) -> dict:
        keys = CSV_HEADER.split(",")
        obj = dict(zip(keys, self._cells()))
        for k in ("n", "m", "trials", "seed", "max_len"):
            obj[k] = int(obj[k])
        if self.c_value is not None:
            obj["C"] = f"{self.c_value:g}"
            obj["predicted_count"] = f"{self.predicted_count:.6f}"
        return obj


def run_trials(n: int, m: int, seed: int, trials: int, workers: int = 1):
    """Per-trial (N, p, q) for trials keyed (seed, 0..trials-1).

    Thread workers each process a contiguous trial range with the nogil
    kernel; results land in per-trial slots, so output is independent of
    scheduling and worker count.
    """
    n_arr = np.empty(trials, np.int64)
    p_arr = np.empty(trials, np.int64)
    q_arr = np.empty(trials, np.int64)
    ok_arr = np.empty(trials, np.uint8)
    u_seed = np.uint64(seed)
    if workers <= 1 or trials < 2:
        _kernels.run_trials_range(n, m, u_seed, 0, trials, n_arr, p_arr, q_arr, ok_arr)
    else:
        bounds = np.linspace(0, trials, min(workers, trials) + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _kernels.run_trials_range, n, m, u_seed, int(lo), int(hi),
                    n_arr[lo:hi], p_arr[lo:hi], q_arr[lo:hi], ok_arr[lo:hi],
                )
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            ]
            for f in futures:
                f.result()
    if not ok_arr.all():
        bad = int(np.flatnonzero(ok_arr == 0)[0])
        raise StructureError(f"trial {bad} produced an inconsistent census")
    return n_arr, p_arr, q_arr


def run_exhaustive_bits(n: int, m: int, cap: int = DEFAULT_FIELD_CAP):
    """All 2^(nm) fields as 'trials' (trial index = direction bit pattern)."""
    nm = n * m
    if nm > cap:
        raise CapExceededError("exhaustive-bits sampling", nm, cap)
    total = 1 << nm
    n_arr = np.empty(total, np.int64)
    p_arr = np.empty(total, np.int64)
    q_arr = np.empty(total, np.int64)
    ok_arr = np.empty(total, np.uint8)
    _kernels.enum_bits_range(n, m, 0, total, n_arr, p_arr, q_arr, ok_arr)
    if not ok_arr.all():
        raise StructureError("exhaustive enumeration produced an inconsistent census")
    return n_arr, p_arr, q_arr


def aggregate_row(
    n: int, m: int, seed: int, n_arr, p_arr, q_arr,
    c_value: float | None = None, predicted_count: float | None = None,
) -> ScanRow:
    trials = len(n_arr)
    if int(n_arr.min()) < 1:
        raise StructureError("a trial reported zero cycles")
    lens = n * p_arr + m * q_arr
    counts = np.bincount(n_arr)
    sum_two = sum(int(c) << k for k, c in enumerate(counts.tolist()))
    sum_four = sum(int(c) << (2 * k) for k, c in enumerate(counts.tolist()))
    if sum_two < 2 * trials:
        raise StructureError("sum of 2^N fell below 2 per trial; impossible when N >= 1")
    class_counts: dict[tuple[int, int], int] = {}
    pq = p_arr * (n * m + 1) + q_arr
    for packed, tot in zip(*np.unique(pq, return_counts=True)):
        sel = pq == packed
        cls = (int(p_arr[sel][0]), int(q_arr[sel][0]))
        class_counts[cls] = int(n_arr[sel].sum())
    return ScanRow(
        n=n,
        m=m,
        trials=trials,
        seed=seed,
        sum_n=int(n_arr.sum()),
        sum_n_sq=int((n_arr * n_arr).sum()),
        class_counts=class_counts,
        sum_len=int((n_arr * lens).sum()),
        max_len=int(lens.max()),
        sum_two_pow_n=sum_two,
        sum_four_pow_n=sum_four,
        c_value=c_value,
        predicted_count=predicted_count,
    )


def m_for_c(n: int, p: int, q: int, c: float) -> int:
    """Sweep height m = floor((p/q) n + C sqrt(n ln n)); natural log."""
    return math.floor(p * n / q + c * math.sqrt(n * math.log(n)))


def record_line(n: int, m: int, seed: int, trial: int, ncyc: int, p: int, q: int) -> str:
    lengths = [n * p + m * q] * ncyc
    rec = {"n": n, "m": m, "seed": seed, "trial": trial, "N": ncyc, "p": p, "q": q,
           "lengths": lengths}
    return json.dumps(rec, separators=(",", ":"))


def run_scan(config: ScanConfig) -> list[ScanRow]:
    """Execute a sweep; returns one row per sweep point and writes any
    configured output files."""
    config.validate()
    TorusDims(config.n, config.m or 1)  # early dim sanity
    rows: list[ScanRow] = []
    record_lines: list[str] = []
    if config.mode == "sample":
        if config.exhaustive_bits:
            n_arr, p_arr, q_arr = run_exhaustive_bits(config.n, config.m)
        else:
            n_arr, p_arr, q_arr = run_trials(
                config.n, config.m, config.seed, config.trials, config.workers
            )
        rows.append(aggregate_row(config.n, config.m, config.seed, n_arr, p_arr, q_arr))
        if config.jsonl_records is not None:
            for t in range(len(n_arr)):
                record_lines.append(
                    record_line(config.n, config.m, config.seed, t,
                                int(n_arr[t]), int(p_arr[t]), int(q_arr[t]))
                )
    elif config.mode == "scan_m":
        for m in range(config.m_from, config.m_to + 1, config.m_step):
            TorusDims(config.n, m)
            n_arr, p_arr, q_arr = run_trials(
                config.n, m, config.seed, config.trials, config.workers
            )
            rows.append(aggregate_row(config.n, m, config.seed, n_arr, p_arr, q_arr))
    else:  # scan_C
        from .rational import ExtrapolationWarning, expected_cycles_formula

        for c in config.c_list:
            m = m_for_c(config.n, config.p, config.q, c)
            TorusDims(config.n, m)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ExtrapolationWarning)
                pred = expected_cycles_formula(config.n, abs(c), config.p, config.q)
            n_arr, p_arr, q_arr = run_trials(
                config.n, m, config.seed, config.trials, config.workers
            )
            rows.append(
                aggregate_row(config.n, m, config.seed, n_arr, p_arr, q_arr,
                              c_value=c, predicted_count=pred)
            )
    if config.out is not None:
        write_rows(rows, config.out, config.fmt)
    if record_lines and config.jsonl_records is not None:
        with open(config.jsonl_records, "w", encoding="utf-8", newline="\n") as fp:
            fp.write("\n".join(record_lines) + "\n")
    return rows


def rows_to_csv(rows: list[ScanRow]) -> str:
    header = SCAN_C_HEADER if rows and rows[0].c_value is not None else CSV_HEADER
    return "\n".join([header] + [r.csv_line() for r in rows]) + "\n"


def rows_to_jsonl(rows: list[ScanRow]) -> str:
    return "\n".join(json.dumps(r.json_obj(), separators=(",", ":")) for r in rows) + "\n"


def write_rows(rows: list[ScanRow], path, fmt: str = "csv") -> None:
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_jsonl(rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        fp.write(text)
