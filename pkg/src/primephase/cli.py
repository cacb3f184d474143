"""Command-line front end: regenerate every table and figure dataset as CSV/JSON.

Subcommands: tables, hist, scan, bounds, crossing, report.  Data goes to the
output stream (or --out), errors to stderr; identical configuration produces
byte-identical output.  PRIMEPHASE_THREADS caps internal parallelism.
"""

import argparse
import csv
import json
import math
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from . import ingest, phase, pipeline, stats
from .phase import X_MIN_ASYMPTOTIC, envelope_by_name
from .primes import SIEVE_LIMIT, Category
from .specfun import DEFAULT_R_TERMS

SCAN_COLUMNS = [
    ("x", "int"),
    ("sqrt_pi_minus_sqrt_r", "scan"),
    ("sqrt_li_minus_sqrt_pi", "scan"),
    ("sqrt_li_minus_sqrt_r", "scan"),
    ("li_minus_pi", "scan"),
    ("eta1", "scan"),
    ("eta2", "scan"),
    ("cos_delta", "scan"),
    ("cos_delta_bar", "scan"),
]

BOUNDS_COLUMNS = [
    ("x", "int"),
    ("li_minus_pi", "scan"),
    ("exact_lo", "scan"),
    ("exact_hi", "scan"),
    ("asym_lo", "scan"),
    ("asym_hi", "scan"),
    ("li_minus_r", "scan"),
]

LOG_WINDOWS = 200


def _parse_int(text: str) -> int:
    """Integer accepting scientific notation ('1e6' -> 1000000)."""
    try:
        return int(Decimal(text))
    except InvalidOperation:
        raise ValueError(f"not a number: {text!r}") from None


def _parse_r_terms(text: str) -> int | None:
    if text == "full":
        return None
    n = int(text)
    if n < 1:
        raise ValueError("r-terms must be a positive integer or 'full'")
    return n


def _format_cell(value, kind: str) -> str:
    if value is None:
        return ""
    if kind == "stat":
        return f"{value:.6f}"
    if kind == "scan":
        return f"{value:.12g}"
    return str(value)


def _json_value(value, kind: str):
    if value is None:
        return None
    if kind == "stat":
        return round(float(value), 6)
    if kind == "scan":
        return float(f"{float(value):.12g}")
    return value


def _write(args, columns, rows, comments=()) -> int:
    """Emit rows as CSV or JSON to --out or stdout."""
    names = [name for name, _ in columns]
    kinds = [kind for _, kind in columns]
    out_path = getattr(args, "out", None)
    if args.format == "json":
        payload = [dict(zip(names, (_json_value(v, k) for v, k in zip(row, kinds))))
                   for row in rows]
        text = json.dumps(payload, indent=1)
        if out_path:
            Path(out_path).write_text(text + "\n", encoding="utf-8")
        else:
            sys.stdout.write(text + "\n")
        return 0

    def write_csv(fh):
        for comment in comments:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in rows:
            writer.writerow([_format_cell(v, k) for v, k in zip(row, kinds)])

    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh)
    else:
        write_csv(sys.stdout)
    return 0


def _checkpoints_upto(max_x: int) -> list[int]:
    """Powers of ten from 100 through max_x, always ending at max_x."""
    cps = [10**k for k in range(2, 10) if 10**k <= max_x]
    if not cps or cps[-1] != max_x:
        cps.append(max_x)
    return cps


def cmd_tables(args) -> int:
    params = envelope_by_name(args.eta)
    category = Category(args.category)
    checkpoints = _checkpoints_upto(args.max)
    collected = stats.collect_moments(
        checkpoints, [(args.quantity, params)], [category], r_terms=args.r_terms)
    rows = []
    for cp in checkpoints:
        acc = collected[cp][(args.quantity, params.kind)][category]
        rows.append((2, cp, acc.mean, acc.sigma, acc.mean_abs, acc.count))
    columns = [("range_lo", "int"), ("range_hi", "int"), ("mean", "stat"),
               ("sigma", "stat"), ("mean_abs", "stat"), ("count", "int")]
    comments = [f"quantity={args.quantity} eta={args.eta} "
                f"category={category.value} r_terms={args.r_terms or 'full'}"]
    return _write(args, columns, rows, comments)


def cmd_hist(args) -> int:
    params = envelope_by_name(args.eta)
    hist = stats.collect_histograms([args.max], params, r_terms=args.r_terms)[args.max]
    moments = stats.collect_moments([args.max], [("cos_delta", params)],
                                    r_terms=args.r_terms)
    acc = moments[args.max][("cos_delta", params.kind)][Category.ALL]
    dens = stats.density(hist)
    overlay = stats.GaussianOverlay()
    rows = [("-inf", "-1", int(hist.underflow), None, None)]
    for i, (center, d) in enumerate(dens):
        lo_edge, hi_edge = stats.COS_DELTA_EDGES[i], stats.COS_DELTA_EDGES[i + 1]
        gauss = overlay.height * math.exp(
            -((center - overlay.mean) ** 2) / (2.0 * overlay.sigma ** 2))
        rows.append((f"{lo_edge:g}", f"{hi_edge:g}", int(hist.counts[i]), d, gauss))
    rows.append(("1", "inf", int(hist.overflow), None, None))
    columns = [("bin_lo", "str"), ("bin_hi", "str"), ("count", "int"),
               ("density", "scan"), ("gaussian", "scan")]
    comments = [f"range=[2,{args.max}] eta={args.eta} r_terms={args.r_terms or 'full'}",
                f"sample_mean={acc.mean:.6f} sample_sigma={acc.sigma:.6f} "
                f"overlay_mean={overlay.mean} overlay_sigma={overlay.sigma}"]
    return _write(args, columns, rows, comments)


def _scan_rows_sieved(args, params):
    for block in pipeline.iter_blocks(args.x_lo, args.x_hi, r_terms=args.r_terms):
        sqrt_pi = np.sqrt(block.pi)
        sqrt_r = np.sqrt(block.r)
        sqrt_li = np.sqrt(block.li)
        xf = block.x.astype(np.float64)
        e1 = phase.eta(phase.ETA1, xf)
        e2 = phase.eta(phase.ETA2, xf)
        e_sel = e1 if params.kind == "eta1" else e2
        cd = (sqrt_pi - sqrt_r) / e_sel
        cdb = (block.pi - block.r - e_sel**2) / (2.0 * sqrt_r * e_sel)
        for i in range(len(block)):
            yield (int(block.x[i]), sqrt_pi[i] - sqrt_r[i], sqrt_li[i] - sqrt_pi[i],
                   sqrt_li[i] - sqrt_r[i], block.li[i] - block.pi[i],
                   e1[i], e2[i], cd[i], cdb[i])


def _scan_rows_table(args, params):
    table = ingest.load_pi_table(args.pi_table)
    for s in ingest.extended_samples(table, params, r_terms=args.r_terms):
        if not args.x_lo <= s.x <= args.x_hi:
            continue
        xf = float(s.x)
        sqrt_pi = math.sqrt(s.pi_x)
        sqrt_r = math.sqrt(s.r_x)
        sqrt_li = math.sqrt(s.li_x)
        yield (s.x, sqrt_pi - sqrt_r, sqrt_li - sqrt_pi, sqrt_li - sqrt_r,
               s.li_x - s.pi_x, phase.eta(phase.ETA1, xf), phase.eta(phase.ETA2, xf),
               s.cos_delta, s.cos_delta_bar)


def _decimate_log(rows, x_lo, x_hi, value_index):
    """Keep the min and max row of `value_index` per logarithmic window."""
    edges = np.logspace(math.log10(x_lo), math.log10(x_hi), LOG_WINDOWS + 1)
    keep: dict[int, tuple] = {}
    for row in rows:
        w = int(np.searchsorted(edges, row[0], side="right") - 1)
        w = min(max(w, 0), LOG_WINDOWS - 1)
        cur = keep.get(w)
        if cur is None:
            keep[w] = (row, row)
        else:
            lo_row, hi_row = cur
            if row[value_index] < lo_row[value_index]:
                lo_row = row
            if row[value_index] > hi_row[value_index]:
                hi_row = row
            keep[w] = (lo_row, hi_row)
    out = []
    for w in sorted(keep):
        lo_row, hi_row = keep[w]
        pair = sorted({lo_row, hi_row}, key=lambda r: r[0])
        out.extend(pair)
    return out


def _require_scannable(args) -> None:
    if args.x_lo < 2 or args.x_hi < args.x_lo:
        raise ValueError(f"invalid range [{args.x_lo}, {args.x_hi}]")
    if args.pi_table is None and args.x_hi > SIEVE_LIMIT:
        raise ValueError(
            f"x_hi={args.x_hi} beyond sieve range {SIEVE_LIMIT:.0e}; "
            "pass --pi-table to use ingested prime counts")


def cmd_scan(args) -> int:
    params = envelope_by_name(args.eta)
    _require_scannable(args)
    rows = (_scan_rows_table(args, params) if args.pi_table
            else _scan_rows_sieved(args, params))
    if args.decimate == "log":
        rows = _decimate_log(rows, args.x_lo, args.x_hi, value_index=1)
    comments = [f"range=[{args.x_lo},{args.x_hi}] eta={args.eta} "
                f"r_terms={args.r_terms or 'full'} decimate={args.decimate}"]
    return _write(args, SCAN_COLUMNS, rows, comments)


def _bounds_row(x, li_x, pi_x, r_x, params):
    sqrt_r = math.sqrt(r_x)
    e = phase.eta(params, float(x))
    asym_lo = asym_hi = None
    if x >= X_MIN_ASYMPTOTIC:
        asym_lo, asym_hi = phase.li_pi_bounds_asymptotic(float(x), params)
    return (x, li_x - pi_x, li_x - (sqrt_r + e) ** 2, li_x - (sqrt_r - e) ** 2,
            asym_lo, asym_hi, li_x - r_x)


def _bounds_rows(args, params):
    if args.pi_table:
        table = ingest.load_pi_table(args.pi_table)
        for s in ingest.extended_samples(table, params, r_terms=args.r_terms):
            if args.x_lo <= s.x <= args.x_hi:
                yield _bounds_row(s.x, s.li_x, s.pi_x, s.r_x, params)
        return
    for block in pipeline.iter_blocks(args.x_lo, args.x_hi, r_terms=args.r_terms):
        for i in range(len(block)):
            yield _bounds_row(int(block.x[i]), block.li[i], int(block.pi[i]),
                              block.r[i], params)


def cmd_bounds(args) -> int:
    params = envelope_by_name(args.eta)
    _require_scannable(args)
    rows = _bounds_rows(args, params)
    if args.decimate == "log":
        rows = _decimate_log(rows, args.x_lo, args.x_hi, value_index=1)
    comments = [f"range=[{args.x_lo},{args.x_hi}] eta={args.eta} "
                f"r_terms={args.r_terms or 'full'} "
                f"asymptotic_from={X_MIN_ASYMPTOTIC:.0e}"]
    return _write(args, BOUNDS_COLUMNS, rows, comments)


def cmd_crossing(args) -> int:
    params = envelope_by_name(args.eta)
    big_l = phase.first_crossing_estimate(params)
    log10_x = big_l / math.log(10.0)
    lines = [f"eta={args.eta}", f"L = ln x = {big_l:.4f}", f"x ~ 10^{log10_x:.2f}"]
    if args.eta == "eta1":
        lines.append(
            "note: 1e65 is sometimes quoted for this envelope's crossing; the "
            "solved root matches e^65, not 10^65, and is reported unchanged")
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args) -> int:
    from . import report  # deferred: pulls in matplotlib

    report.run_report(Path(args.out_dir), max_x=args.max, r_terms=args.r_terms)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primephase",
        description="Prime-counting approximations and envelope/phase statistics")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, eta=True, fmt=True, r_terms_default=DEFAULT_R_TERMS):
        if eta:
            p.add_argument("--eta", choices=["eta1", "eta2"], default="eta1",
                           help="envelope (default eta1)")
        if fmt:
            p.add_argument("--format", choices=["csv", "json"], default="csv")
            p.add_argument("--out", metavar="PATH", default=None,
                           help="output file (default stdout)")
        p.add_argument("--r-terms", type=_parse_r_terms, default=r_terms_default,
                       metavar="N|full",
                       help="R evaluation: fixed-depth partial sum (tabulation "
                            "convention, default 14) or 'full' for the Gram series")

    p = sub.add_parser("tables", help="grouped means/sigmas over 2..10^k ranges")
    p.add_argument("--max", type=_parse_int, default=10**6)
    p.add_argument("--quantity", choices=list(stats.QUANTITIES), default="cos_delta")
    p.add_argument("--category", choices=[c.value for c in Category], default="all")
    add_common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("hist", help="cos(delta) histogram with Gaussian overlay")
    p.add_argument("--max", type=_parse_int, default=10**6)
    add_common(p)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("scan", help="per-integer phase quantities over a range")
    p.add_argument("x_lo", type=_parse_int)
    p.add_argument("x_hi", type=_parse_int)
    p.add_argument("--pi-table", metavar="PATH", default=None,
                   help="CSV of (x, pi) rows for x beyond the sieve range")
    p.add_argument("--decimate", choices=["none", "log"], default="none",
                   help="'log' keeps min/max rows in 200 logarithmic windows")
    add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bounds", help="exact and asymptotic bounds on li - pi")
    p.add_argument("x_lo", type=_parse_int)
    p.add_argument("x_hi", type=_parse_int)
    p.add_argument("--pi-table", metavar="PATH", default=None)
    p.add_argument("--decimate", choices=["none", "log"], default="none")
    add_common(p, r_terms_default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("crossing", help="ln-x root where the envelope allows li-pi to change sign")
    p.add_argument("--eta", choices=["eta1", "eta2"], default="eta2")
    p.add_argument("--out", metavar="PATH", default=None)
    p.set_defaults(func=cmd_crossing)

    p = sub.add_parser("report", help="render tables, figure CSVs, and PNG figures")
    p.add_argument("--max", type=_parse_int, default=10**6)
    p.add_argument("--out-dir", metavar="DIR", default="primephase-report")
    p.add_argument("--r-terms", type=_parse_r_terms, default=DEFAULT_R_TERMS,
                   metavar="N|full")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
