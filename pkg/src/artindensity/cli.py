"""Command-line entry point.

Exit codes: 0 on success, 1 on a domain error (one line ``domain-error: ...``
on stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .arith import DomainError, format_rational, parse_rational
from .census import MAX_LIMIT, ConfigError, get_sieve, heuristic_sum, run_census
from .density import (
    ARTIN,
    artin_constant_partial,
    delta_closed,
    format_decimal,
    is_wud,
    residues,
    vanishing_criterion,
    wud_set,
)
from .lenstra import delta_truncated


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _limit(text: str) -> int:
    v = _positive(text)
    if not 10 <= v <= MAX_LIMIT:
        raise argparse.ArgumentTypeError(f"x must lie in [10, {MAX_LIMIT}]")
    return v


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(dumps(rows if len(rows) != 1 else rows[0]) + "\n")
        return
    if not rows:
        return
    keys = list(rows[0])
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow(["" if r[k] is None else r[k] for k in keys])
        return
    cells = [[("" if r[k] is None else str(r[k])) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out.write("  ".join(k.ljust(wd) for k, wd in zip(keys, widths)).rstrip() + "\n")
    for c in cells:
        out.write("  ".join(v.ljust(wd) for v, wd in zip(c, widths)).rstrip() + "\n")


def _cmd_density(args, out) -> None:
    _emit([delta_closed(args.a, args.f, args.g).to_dict()], args.format, out)


def _cmd_density_table(args, out) -> None:
    rows = []
    for a in residues(args.f):
        r = delta_closed(a, args.f, args.g)
        rows.append({
            "a": a,
            "coeff": format_rational(r.coeff),
            "value": format_decimal(r.coeff),
            "vanishing": vanishing_criterion(a, args.f, args.g)[1].value,
        })
    _emit(rows, args.format, out)


def _cmd_oracle(args, out) -> None:
    closed = delta_closed(args.a, args.f, args.g)
    value, bound = delta_truncated(args.a, args.f, args.g, args.oracle_n)
    gap = abs(value - closed.value)
    _emit([{
        "coeff": format_rational(closed.coeff),
        "closed": format_decimal(closed.coeff),
        "truncated": format(value, ".12g"),
        "gap": format(gap, ".3g"),
        "tail_bound": format(bound, ".3g"),
        "agree": gap <= bound,
    }], args.format, out)


def _cmd_wud(args, out) -> None:
    s = wud_set(args.g)
    row = {"g": format_rational(args.g), "wud_set": str(s)}
    if args.f is not None:
        row["f"] = args.f
        row["is_wud"] = is_wud(args.f, args.g)
        row["in_set"] = args.f in s
    if args.fmax is not None:
        row["computed_upto_fmax"] = " ".join(
            str(f) for f in range(1, args.fmax + 1) if is_wud(f, args.g)
        )
    _emit([row], args.format, out)


def _cmd_census(args, out) -> None:
    tables = get_sieve(args.x, args.sieve_cache)
    report = run_census(args.g, args.f, args.x, tables, args.threads)
    if args.format == "json":
        out.write(report.to_json() + "\n")
    elif args.format == "csv":
        out.write(report.to_csv())
    else:
        out.write(f"g={format_rational(report.g)} f={report.f} x={report.x} pi(x)={report.pi_x} "
                  f"excluded={list(report.excluded)}\n")
        buf = io.StringIO(report.to_csv())
        _emit(list(csv.DictReader(buf)), "table", out)


def _cmd_heuristic(args, out) -> None:
    tables = get_sieve(args.x, args.sieve_cache)
    hs = heuristic_sum(args.g, args.f, args.a, args.x, tables)
    count = run_census(args.g, args.f, args.x, tables, args.threads).record(args.a).count
    rel = abs(hs - count) / count if count else float("nan")
    _emit([{
        "heuristic": format(hs, ".12g"),
        "count": count,
        "relative_gap": format(rel, ".3g"),
    }], args.format, out)


def _cmd_constant(args, out) -> None:
    value, bound = artin_constant_partial(args.cutoff)
    _emit([{
        "cutoff": args.cutoff,
        "partial": format(value, ".12g"),
        "error_bound": format(bound, ".3g"),
        "reference": str(ARTIN.value),
    }], args.format, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="artin-density",
        description="Densities of primes in progressions with a prescribed primitive root.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *opts):
        p = sub.add_parser(name)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        for opt in opts:
            opt(p)
        return p

    g_opt = lambda p: p.add_argument("--g", type=_rational, required=True)
    f_opt = lambda p: p.add_argument("--f", type=_positive, default=1)
    a_opt = lambda p: p.add_argument("--a", type=_positive, default=1)
    x_opt = lambda p: p.add_argument("--x", type=_limit, required=True)

    def run_opts(p):
        p.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
        p.add_argument("--sieve-cache", metavar="PATH", default=None)

    add("density", _cmd_density, g_opt, f_opt, a_opt)
    add("density-table", _cmd_density_table, g_opt, f_opt)
    add("oracle", _cmd_oracle, g_opt, f_opt, a_opt,
        lambda p: p.add_argument("--oracle-n", type=_positive, default=10**6))
    add("wud", _cmd_wud, g_opt,
        lambda p: p.add_argument("--f", type=_positive, default=None),
        lambda p: p.add_argument("--fmax", type=_positive, default=None))
    add("census", _cmd_census, g_opt, f_opt, x_opt, run_opts)
    add("heuristic", _cmd_heuristic, g_opt, f_opt, a_opt, x_opt, run_opts)
    add("constant", _cmd_constant,
        lambda p: p.add_argument("--cutoff", type=_positive, default=10**6))
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except (DomainError, ConfigError) as exc:
        err.write(f"domain-error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
