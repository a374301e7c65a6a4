"""Command-line interface.

Subcommands: verify, sweep, prime-sweep, calibrate, sum, count.
Exit codes: 0 success, 1 property failure, 2 config error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, counts, sums
from .characters import MultChar
from .config import ExperimentConfig, load_config
from .errors import BoxsumsError, ConfigInvalidError, NotPrimeError, TooLargeError
from .harness import (
    CalibrationStore,
    run_calibrate,
    run_prime_sweep,
    run_sweep,
    write_prime_sweep_csv,
    write_prime_sweep_json,
    write_records_csv,
    write_records_json,
)
from .modular import ExponentVector, build_context
from .sums import Box, PhaseWeights, SumSpec, TableWeights, UnitWeights
from .verify import run_verify

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def _int_list(raw: str) -> list[int]:
    try:
        return [int(v) for v in raw.split(",") if v != ""]
    except ValueError as exc:
        raise ConfigInvalidError(f"expected comma-separated integers, got {raw!r}") from exc


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--seed", type=int, help="64-bit seed for randomized modes")
    parser.add_argument("--out", help="output file path")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")
    parser.add_argument("--threads", type=int, help="worker threads")
    parser.add_argument("--calibration", help="path to the calibration store")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxsums",
        description="Exponential/character sums over short boxes mod p: "
        "evaluation, counting, and empirical bound verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    _add_common(p_verify)
    p_verify.add_argument("--prime", action="append", type=int, help="grid prime (repeatable)")
    p_verify.add_argument("--trials", type=int, help="seeded trials per cell")

    p_sweep = sub.add_parser("sweep", help="ratio sweep against a bound family")
    _add_common(p_sweep)
    p_sweep.add_argument("--prime", action="append", type=int)
    p_sweep.add_argument("--bound", action="append", choices=bounds.SELECTORS)
    p_sweep.add_argument("--n", action="append", type=int)
    p_sweep.add_argument("--h", action="append", type=int)
    p_sweep.add_argument("--trials", type=int)
    p_sweep.add_argument("--weights", choices=("unit", "phase", "table"))
    p_sweep.add_argument("--r", type=int, help="moment order for moment bounds")

    p_ps = sub.add_parser("prime-sweep", help="per-prime count ratios over a range")
    _add_common(p_ps)
    p_ps.add_argument("--range", nargs=2, type=int, metavar=("LO", "HI"))
    p_ps.add_argument("--nu", type=int)
    p_ps.add_argument("--h", type=int)
    p_ps.add_argument("--k", type=int)

    p_cal = sub.add_parser("calibrate", help="record max observed ratios")
    _add_common(p_cal)
    p_cal.add_argument("--trials", type=int)

    p_sum = sub.add_parser("sum", help="evaluate one sum instance")
    _add_common(p_sum)
    p_sum.add_argument("--p", type=int, required=True)
    p_sum.add_argument("--h", type=int, required=True)
    p_sum.add_argument("--e", required=True, help="comma-separated exponents")
    p_sum.add_argument("--k", required=True, help="comma-separated corners")
    p_sum.add_argument("--lambda", dest="lam", type=int, default=1)
    p_sum.add_argument("--char-index", type=int, help="evaluate a character sum with this index")
    p_sum.add_argument("--weights", default="unit", help="unit | phase:l1,l2,... | file:PATH")
    p_sum.add_argument("--method", choices=("naive", "split"), default="naive")

    p_count = sub.add_parser("count", help="count product-congruence solutions")
    _add_common(p_count)
    p_count.add_argument("--p", type=int, required=True)
    p_count.add_argument("--nu", type=int)
    p_count.add_argument("--h", required=True, help="side length(s), comma-separated")
    p_count.add_argument("--k", default="0", help="corner(s), comma-separated")
    p_count.add_argument("--e", help="exponents; omitted for plain product counts")

    return parser


def _config_from_args(args: argparse.Namespace, mode: str) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    cfg.mode = mode
    if getattr(args, "prime", None):
        cfg.primes = list(args.prime)
    if getattr(args, "bound", None):
        cfg.bounds = list(args.bound)
    if getattr(args, "n", None):
        cfg.n = list(args.n)
    if getattr(args, "h", None) and mode == "sweep":
        cfg.h = list(args.h)
    if getattr(args, "trials", None):
        cfg.trials = args.trials
    if getattr(args, "weights", None):
        cfg.weights = args.weights
    if getattr(args, "r", None):
        cfg.r = args.r
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out:
        cfg.out = args.out
    if args.format:
        cfg.format = args.format
    if args.threads:
        cfg.threads = args.threads
    if mode == "verify" and not cfg.primes:
        cfg.primes = [5, 7, 11, 13, 31, 101]
    if mode in ("sweep", "calibrate") and not cfg.primes:
        cfg.primes = [101, 1009]
    if mode == "prime-sweep":
        if getattr(args, "range", None):
            cfg.prime_range = (args.range[0], args.range[1])
        if getattr(args, "nu", None):
            cfg.nu = args.nu
        if getattr(args, "h", None):
            cfg.h = [args.h]
        if getattr(args, "k", None) is not None:
            cfg.k = args.k
    return cfg


def _parse_weights(raw: str, n: int):
    if raw == "unit":
        return UnitWeights()
    if raw.startswith("phase:"):
        lams = _int_list(raw[len("phase:") :])
        if len(lams) != n:
            raise ConfigInvalidError(f"phase weights need {n} values")
        return PhaseWeights(lams)
    if raw.startswith("file:"):
        with open(raw[len("file:") :], encoding="utf-8") as fh:
            data = json.load(fh)
        tables = [[complex(re, im) for re, im in coord] for coord in data]
        if len(tables) != n:
            raise ConfigInvalidError(f"weight file must hold {n} coordinate tables")
        return TableWeights(tables)
    raise ConfigInvalidError(f"unknown weights {raw!r}")


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, "verify")
    cfg.validate()
    store = CalibrationStore(args.calibration) if args.calibration else None
    report = run_verify(cfg, store=store)
    return EXIT_OK if report.passed else EXIT_PROPERTY_FAILURE


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, "sweep")
    result = run_sweep(cfg)
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    out = cfg.out or "sweep_records." + cfg.format
    if cfg.format == "json":
        write_records_json(result.records, out)
    else:
        write_records_csv(result.records, out)
    for s in result.summaries:
        print(
            f"{s.selector} p={s.p} n={s.n} h={s.h}: max={s.max_ratio:.6f} "
            f"mean={s.mean_ratio:.6f} trials={s.trials}"
        )
    print(f"wrote {len(result.records)} records to {out}")
    return EXIT_OK


def _cmd_prime_sweep(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, "prime-sweep")
    store = CalibrationStore(args.calibration) if args.calibration else None
    report = run_prime_sweep(cfg, store=store)
    if cfg.out:
        if cfg.format == "json":
            write_prime_sweep_json(report, cfg.out)
        else:
            write_prime_sweep_csv(report, cfg.out)
        print(f"wrote {len(report.rows)} rows to {cfg.out}")
    print(f"nu={report.nu} h={report.h} k={report.k} primes={len(report.rows)}")
    for c, frac in report.violation_fractions.items():
        print(f"C={c}: violation fraction {frac:.4f}")
    return EXIT_OK


def _cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, "calibrate")
    if cfg.trials == 20 and not getattr(args, "trials", None):
        cfg.trials = 50
    store = CalibrationStore(args.calibration or "calibration.json")
    run_calibrate(cfg, store)
    print(f"calibration store written to {store.path}")
    return EXIT_OK


def _cmd_sum(args: argparse.Namespace) -> int:
    e = _int_list(args.e)
    k = _int_list(args.k)
    if len(e) != len(k):
        raise ConfigInvalidError("--e and --k must have the same length")
    ctx = build_context(args.p)
    spec = SumSpec(
        ctx=ctx,
        box=Box(tuple(k), args.h),
        e=ExponentVector(tuple(e)),
        weights=_parse_weights(args.weights, len(e)),
        lam=args.lam,
    )
    if args.char_index is not None:
        chi = MultChar(ctx, args.char_index)
        result = (
            sums.character_sum_split(spec, chi)
            if args.method == "split"
            else sums.character_sum_naive(spec, chi)
        )
    else:
        result = (
            sums.monomial_sum_bilinear(spec)
            if args.method == "split"
            else sums.monomial_sum_naive(spec)
        )
    payload = {
        "p": args.p,
        "value_re": result.value.real,
        "value_im": result.value.imag,
        "abs": abs(result.value),
        "terms": result.terms,
        "method": result.method,
    }
    print(json.dumps(payload, indent=1, sort_keys=True))
    return EXIT_OK


def _cmd_count(args: argparse.Namespace) -> int:
    ctx = build_context(args.p)
    hs = _int_list(args.h)
    ks = _int_list(args.k)
    if args.e is not None:
        es = _int_list(args.e)
        if len(ks) == 1 and len(es) > 1:
            ks = ks * len(es)
        if len(hs) == 1 and len(es) > 1:
            hs = hs * len(es)
        result = counts.count_monomial_pairs_brute(ctx, ExponentVector(tuple(es)), hs, ks)
        payload = {"p": args.p, "e": es, "h": hs, "k": ks, "value": result.value, "method": result.method}
    else:
        nu = args.nu or len(hs)
        brute = counts.count_product_pairs_brute(ctx, nu, hs[0], ks[0])
        spectral = counts.count_product_pairs_spectral(ctx, nu, hs[0], ks[0])
        payload = {
            "p": args.p,
            "nu": nu,
            "h": hs[0],
            "k": ks[0],
            "value": brute.value,
            "spectral_value": spectral.value,
        }
    print(json.dumps(payload, indent=1, sort_keys=True))
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "prime-sweep": _cmd_prime_sweep,
    "calibrate": _cmd_calibrate,
    "sum": _cmd_sum,
    "count": _cmd_count,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigInvalidError, NotPrimeError, TooLargeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except AssertionError as exc:
        print(f"property failure: {exc}", file=sys.stderr)
        return EXIT_PROPERTY_FAILURE
    except BoxsumsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
