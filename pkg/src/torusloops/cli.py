"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 cap or guard refusal,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import exact as exact_mod
from . import rational as rational_mod
from .census import find_cycles
from .exact import DEFAULT_CONFIG_CAP, DEFAULT_FIELD_CAP, CapExceededError
from .render import render_svg
from .sampler import load_field
from .scan import ConfigError, ScanConfig, run_scan, rows_to_csv
from .torus import TorusDims

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REFUSED = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusloops",
        description="Quenched random walk / CRSF cycle laboratory on the discrete torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="Monte Carlo censuses at one (n, m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--jsonl", metavar="PATH", help="write one census record per trial")
    p.add_argument(
        "--exhaustive-bits", action="store_true",
        help="enumerate all 2^(nm) fields instead of sampling (small tori only)",
    )

    p = sub.add_parser("scan-m", help="sweep m at fixed n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m-from", type=int, required=True)
    p.add_argument("--m-to", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    p = sub.add_parser("scan-c", help="sweep the deviation scale C at fixed n and p/q")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--c-list", required=True, help="comma-separated C values")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    p = sub.add_parser("exact", help="exact enumeration and the partition identity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--cap", type=int, help="override both enumeration caps")

    p = sub.add_parser("cf", help="continued fraction and convergents of m/n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("predict", help="regime classification for (n, m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q-max", type=int, default=12)
    p.add_argument("--c-spike", type=float, default=1.5)

    p = sub.add_parser("render", help="SVG picture of a field's cycles")
    p.add_argument("--field", required=True, metavar="FILE.crsf")
    p.add_argument("--out", required=True, metavar="FILE.svg")
    return parser


def _cmd_sample(args) -> int:
    config = ScanConfig(
        mode="sample", n=args.n, m=args.m, seed=args.seed, trials=args.trials,
        workers=args.workers, exhaustive_bits=args.exhaustive_bits,
        jsonl_records=args.jsonl,
    )
    rows = run_scan(config)
    sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


def _cmd_scan_m(args) -> int:
    config = ScanConfig(
        mode="scan_m", n=args.n, m_from=args.m_from, m_to=args.m_to, m_step=args.step,
        trials=args.trials, seed=args.seed, workers=args.workers,
        out=args.out, fmt=args.format,
    )
    run_scan(config)
    return EXIT_OK


def _cmd_scan_c(args) -> int:
    try:
        c_list = tuple(float(tok) for tok in args.c_list.split(",") if tok.strip())
    except ValueError as err:
        raise ConfigError(f"bad --c-list: {err}") from err
    config = ScanConfig(
        mode="scan_C", n=args.n, p=args.p, q=args.q, c_list=c_list,
        trials=args.trials, seed=args.seed, workers=args.workers,
        out=args.out, fmt=args.format,
    )
    run_scan(config)
    return EXIT_OK


def _cmd_exact(args) -> int:
    dims = TorusDims(args.n, args.m)
    field_cap = args.cap if args.cap is not None else DEFAULT_FIELD_CAP
    config_cap = args.cap if args.cap is not None else DEFAULT_CONFIG_CAP
    if dims.size <= config_cap:
        identity = exact_mod.verify_identity(dims, cap=config_cap)
        payload = exact_mod.report_to_json(identity.report, identity)
    else:
        report = exact_mod.enumerate_crsf(dims, cap=field_cap)
        payload = exact_mod.report_to_json(report)
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _cmd_cf(args) -> int:
    cf = rational_mod.continued_fraction(args.m, args.n)
    table = rational_mod.convergents(cf)
    sel = rational_mod.select_j0(args.n, table)
    pj, qj = table.entries[sel.index]
    payload = {
        "m": args.m,
        "n": args.n,
        "coefficients": list(cf.coefficients),
        "convergents": [list(e) for e in table.entries],
        "j0": sel.index,
        "j0_saturated": sel.saturated,
        "j0_class": [pj, qj],
    }
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _cmd_predict(args) -> int:
    pred = rational_mod.predict_regime(args.n, args.m, q_max=args.q_max, c_spike=args.c_spike)
    json.dump(rational_mod.prediction_to_json(pred), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _cmd_render(args) -> int:
    field = load_field(args.field)
    census = find_cycles(field)
    render_svg(field, census, out=args.out)
    return EXIT_OK


_COMMANDS = {
    "sample": _cmd_sample,
    "scan-m": _cmd_scan_m,
    "scan-c": _cmd_scan_c,
    "exact": _cmd_exact,
    "cf": _cmd_cf,
    "predict": _cmd_predict,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CapExceededError as err:
        print(f"refused: {err}", file=sys.stderr)
        return EXIT_REFUSED
    except (ConfigError, ValueError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
