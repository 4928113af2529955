"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage (including domain
errors and unusable paths), 3 capacity.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import circle, reps, series, verify
from .arith import CapacityError, DomainError, is_in_Ik

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
CIRCLE_SCHEMA = "pkreps.circle/1"
SERIES_SCHEMA = "pkreps.series/1"
BOUND_SCHEMA = "pkreps.bound/1"
HUA_SCHEMA = "pkreps.hua/1"
SCAN_SUMMARY_SCHEMA = "pkreps.scan-summary/1"
EXCEPTIONAL_SCHEMA = "pkreps.exceptional/1"


def fmt(x: float) -> str:
    return "%.17g" % x


def dumps(obj, indent: int = 0) -> str:
    """JSON text with every float written to 17 significant digits and sorted keys."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}"{k}": {dumps(obj[k], indent + 1)}' for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if math.isfinite(x) else "null"
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _k(value: str) -> int:
    k = int(value)
    if k < 2:
        raise argparse.ArgumentTypeError(f"k must be >= 2, got {k}")
    return k


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(value: str) -> int:
    v = int(value)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _fraction(value: str) -> Fraction:
    try:
        f = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {value}") from exc
    if f <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive value, got {value}")
    return f


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def run_scan(args) -> int:
    result = reps.scan(args.k, args.xmax, threads=args.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"k{args.k}_x{args.xmax}"
    result.write_csv(out / f"scan_{stem}.csv")
    exc_path = out / f"exceptional_{stem}.txt"
    with open(exc_path, "w") as fh:
        fh.write(f"# schema: {EXCEPTIONAL_SCHEMA} k={args.k} x_max={args.xmax}\n")
        for n in result.exceptional:
            fh.write(f"{n}\n")
    density = result.E / args.xmax if args.xmax > 0 else 0.0
    print(dumps({"schema": SCAN_SUMMARY_SCHEMA, "k": args.k, "x_max": args.xmax, "E": result.E,
                 "density": density, "exceptional_file": str(exc_path)}))
    return EXIT_OK


def run_series(args) -> int:
    prod = series.singular_series(args.k, args.n, args.cutoff)
    doc = {"schema": SERIES_SCHEMA, "k": args.k, "n": args.n, "cutoff": args.cutoff,
           "in_Ik": is_in_Ik(args.k, args.n), "product": prod.value, "product_tail_estimate": prod.tail_estimate}
    if args.sum_cutoff:
        ts = series.truncated_sum(args.k, args.n, args.sum_cutoff, args.r)
        pf = series.product_form(args.k, args.n, args.sum_cutoff, args.r)
        doc.update({"sum_cutoff": args.sum_cutoff, "r": args.r, "truncated_sum": ts.value,
                    "product_form": pf.value, "tail_bound": ts.tail_estimate, "skipped": list(pf.skipped)})
    _emit(dumps(doc), args.out)
    return EXIT_OK


def run_verify(args) -> int:
    report = verify.run_suite(args.suite, seed=args.seed, quick=args.quick, k=args.k, X=args.x, s=args.s)
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.ok else EXIT_VERIFY


def _circle_ns(args, cv: circle.CoefficientVector) -> list[int]:
    if args.n:
        return list(args.n)
    third = (cv.n_max - cv.n_min + 1) // 3
    lo = cv.n_min + {"low": 0, "mid": 1, "high": 2}[args.n_range] * third
    return np.unique(np.linspace(lo, lo + third - 1, args.count).astype(np.int64)).tolist()


def run_circle(args) -> int:
    d = circle.dissect(args.x, None if args.p is None else float(args.p), args.q, b=args.b, k=args.k)
    cv = circle.coefficients(args.k, args.x)
    records = []
    for n in _circle_ns(args, cv):
        r, r1, r2 = circle.r_split(args.k, args.x, n, d, cv)
        rec = {"n": n, "r": r, "r1": r1, "r2": r2}
        if args.compare:
            cmp = circle.main_term_compare(args.k, args.x, n, d.P, d)
            rec.update({"prediction": cmp.prediction, "ratio": cmp.ratio, "ratio_flagged": cmp.ratio is None})
        records.append(rec)
    summary = d.summary()
    summary["Q_exact"] = f"{d.Q.numerator}/{d.Q.denominator}"
    _emit(dumps({"schema": CIRCLE_SCHEMA, "k": args.k, "X": args.x, "dissection": summary, "records": records}),
          args.out)
    return EXIT_OK


def run_bound(args) -> int:
    x = args.x if args.x is not None else args.n
    count = reps.count_reps(args.k, args.n)
    doc = {"schema": BOUND_SCHEMA, "k": args.k, "n": args.n, "X": x, "cutoff": args.cutoff, "R": count,
           "selberg_bound": reps.selberg_bound(args.k, args.n, x, args.cutoff), "in_Ik": is_in_Ik(args.k, args.n)}
    if doc["in_Ik"] and args.n >= 2:
        doc["hl_ratio"] = reps.hl_ratio(args.k, args.n, args.cutoff, count)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def run_hua(args) -> int:
    h = circle.hua_moment(args.k, args.x, args.s)
    _emit(dumps({"schema": HUA_SCHEMA, "k": args.k, "X": args.x, "s": args.s, "exact": h.exact, "grid": h.grid,
                 "grid_points": h.grid_points, "normalized": h.normalized}), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pkreps", description="Primes plus k-th powers: counts and circle-method checks.")
    parser.add_argument("--threads", type=_positive, default=1, help="worker threads (scan)")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled inputs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="R_k(n) for n <= xmax and the exceptional set")
    p.add_argument("--k", type=_k, required=True)
    p.add_argument("--xmax", type=_nonneg, required=True)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=run_scan)

    p = sub.add_parser("series", help="truncated singular series")
    p.add_argument("--k", type=_k, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--cutoff", type=_nonneg, default=1000, help="Euler product cutoff")
    p.add_argument("--sum-cutoff", type=_nonneg, default=0, help="also report the q-sum and product form to R")
    p.add_argument("--r", type=_positive, default=1)
    p.add_argument("--out")
    p.set_defaults(func=run_series)

    p = sub.add_parser("verify", help="identity batteries")
    p.add_argument("--suite", choices=("characters", "singular", "circle", "hua", "all"), default="all")
    p.add_argument("--k", type=_k, default=2, help="hua suite")
    p.add_argument("--x", type=_positive, default=16, help="hua suite")
    p.add_argument("--s", type=_positive, default=2, help="hua suite")
    p.add_argument("--quick", action="store_true", help="smaller ranges")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--out")
    p.set_defaults(func=run_verify)

    p = sub.add_parser("circle", help="major/minor arc split of r(X, n)")
    p.add_argument("--k", type=_k, required=True)
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--p", type=_fraction)
    p.add_argument("--q", type=_fraction, help="defaults to X P^(-4k+5.9995)")
    p.add_argument("--b", type=float, default=circle.DEFAULT_B, help="P = X^b when --p is omitted")
    p.add_argument("--n", type=int, nargs="*")
    p.add_argument("--n-range", choices=("low", "mid", "high"), default="mid")
    p.add_argument("--count", type=_positive, default=10)
    p.add_argument("--compare", action="store_true", help="add the main-term prediction")
    p.add_argument("--out")
    p.set_defaults(func=run_circle)

    p = sub.add_parser("bound", help="R_k(n) against the sieve bound and the Hardy-Littlewood ratio")
    p.add_argument("--k", type=_k, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--x", type=_positive)
    p.add_argument("--cutoff", type=_positive, default=1000)
    p.add_argument("--out")
    p.set_defaults(func=run_bound)

    p = sub.add_parser("hua", help="mean value of |F_k|^(2s)")
    p.add_argument("--k", type=_k, required=True)
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--s", type=_positive, required=True)
    p.add_argument("--out")
    p.set_defaults(func=run_hua)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity: {exc}. Reduce the size parameters or use a smaller range.", file=sys.stderr)
        return EXIT_CAPACITY
    except DomainError as exc:
        print(f"usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error on {exc.filename or 'output'}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
