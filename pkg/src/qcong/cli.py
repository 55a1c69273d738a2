"""Command-line front end.

Subcommands:
  series         print exact coefficients of a named q-expansion
  table          export a basis table as CSV/JSON rows
  verify         run one verification suite (or all), write reports/figures
  seed-validate  sanity-check a newform coefficient seed file

Exit codes: 0 success / all congruences pass, 1 violations found,
2 operational error (bad arguments, malformed input, missing data).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import bases, congruences, forms, genus1
from .errors import QcongError

SERIES_SPECS = "j, delta, partition, eta:<d:r,...>, jm:<m>, f:<p>:<m>, f:<N>:<m>"


def _parse_range(text):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"range must look like 'a..b', got {text!r}")
    return int(lo), int(hi)


def _series_for_spec(spec, prec):
    if spec == "j":
        return forms.j_series(prec)
    if spec == "delta":
        return forms.delta_series(prec)
    if spec == "partition":
        return forms.partition_series(prec)
    if spec.startswith("eta:"):
        return forms.eta_quotient(forms.EtaQuotientSpec.parse(spec[4:]), prec)
    if spec.startswith("jm:"):
        m = int(spec[3:])
        return bases.build_j_basis(m, prec).element(m)
    if spec.startswith("f:"):
        _, level, m = spec.split(":")
        level, m = int(level), int(m)
        if level in bases.GENUS0_PRIMES:
            return bases.build_genus0_basis(level, m, prec).element(m)
        if level in genus1.GENUS1_LEVELS:
            return genus1.build_genus1_basis(level, m, prec).element(m)
        raise ValueError(f"level {level} has no basis here (genus-zero primes "
                         f"{bases.GENUS0_PRIMES} or genus-one levels {genus1.GENUS1_LEVELS})")
    raise ValueError(f"unknown series spec {spec!r}; known: {SERIES_SPECS}")


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_series(args):
    series = _series_for_spec(args.spec, args.prec)
    lo, hi = _parse_range(args.range) if args.range else (series.val,
                                                          min(series.val + 9, series.prec - 1))
    rows = [(n, series.coeff(n)) for n in range(lo, hi + 1)]
    if args.format == "json":
        payload = {"spec": args.spec, "prec": args.prec,
                   "coefficients": [[n, str(c)] for n, c in rows]}
        _emit(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n", args.out)
    elif args.format == "csv":
        lines = ["n,coefficient"] + [f"{n},{c}" for n, c in rows]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit("".join(f"{n}\t{c}\n" for n, c in rows), args.out)
    return 0


def cmd_table(args):
    level = args.level
    if level == 1:
        table = bases.build_j_basis(args.max_index, args.prec)
    elif level in bases.GENUS0_PRIMES:
        table = bases.build_genus0_basis(level, args.max_index, args.prec)
    elif level in genus1.GENUS1_LEVELS:
        table = genus1.build_genus1_basis(level, args.max_index, args.prec)
    else:
        raise ValueError(f"no basis family at level {level}")
    n_lo, n_hi = _parse_range(args.range) if args.range else (None, None)
    rows = list(table.rows(n_lo, n_hi))
    if args.format == "json":
        payload = [{"level": lv, "kind": kd, "m": m, "n": n, "coefficient": str(c)}
                   for lv, kd, m, n, c in rows]
        _emit(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n", args.out)
    else:
        lines = ["level,kind,m,n,coefficient"]
        lines += [f"{lv},{kd},{m},{n},{c}" for lv, kd, m, n, c in rows]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


_OVERRIDE_FLAGS = ("nMax", "pMax", "aMax", "alphaMax", "betaMax", "mMax",
                   "bound", "p", "N", "window", "prec")


def _collect_overrides(args):
    return {k: getattr(args, k) for k in _OVERRIDE_FLAGS if getattr(args, k) is not None}


def cmd_verify(args):
    overrides = _collect_overrides(args)
    if args.suite == "all":
        if set(overrides) - {"prec"}:
            raise ValueError("'verify all' accepts only --prec of the grid overrides")
        names = list(congruences.SUITE_ORDER)
    else:
        names = [args.suite]
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(congruences.run_suite, n, overrides) for n in names]
            reports = [f.result() for f in futures]
    else:
        reports = [congruences.run_suite(n, overrides) for n in names]
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for rep in reports:
        print(f"{rep.suite}: {rep.status} (checked {rep.checked}, skipped {rep.skipped}, "
              f"series precision q^{rep.precision}, {rep.millis} ms)")
        if out_dir:
            if args.format == "json":
                (out_dir / f"{rep.suite}.json").write_text(rep.to_json())
            elif args.format == "csv":
                (out_dir / f"{rep.suite}.csv").write_text(rep.to_csv())
            else:
                (out_dir / f"{rep.suite}.txt").write_text(rep.to_text())
            if not args.no_figures:
                from . import figures
                figures.report_figure(rep, out_dir / f"{rep.suite}.png")
    if out_dir and not args.no_figures and len(reports) > 1:
        from . import figures
        figures.summary_figure(reports, out_dir / "summary.png")
    return 0 if all(r.status == "pass" for r in reports) else 1


def cmd_seed_validate(args):
    try:
        raw = json.loads(Path(args.path).read_text())
        level, f = genus1.parse_seed(raw, expect_level=args.level)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"malformed seed: {exc}", file=sys.stderr)
        return 2
    try:
        genus1.check_eigenform(f, level, min(f.prec - 1, 200))
    except QcongError as exc:
        print(f"seed fails eigenform sanity: {exc}", file=sys.stderr)
        return 1
    models = genus1.load_models()
    if level in models and f.prec >= 40:
        try:
            pair = genus1.solve_xy(f, models[level], min(60, f.prec - 3))
            pair.verify(f)
        except QcongError as exc:
            print(f"seed inconsistent with the level-{level} curve model: {exc}",
                  file=sys.stderr)
            return 1
    print(f"seed for level {level} OK ({f.prec - 1} coefficients)")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="qcong",
        description="Exact q-series engine and coefficient-divisibility verifier.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("series", help="print coefficients of a named series")
    sp.add_argument("spec", help=f"one of: {SERIES_SPECS}")
    sp.add_argument("--prec", type=int, default=32, help="working precision (exclusive)")
    sp.add_argument("--range", help="exponent range a..b (default: first terms)")
    sp.add_argument("--format", choices=("text", "csv", "json"), default="text")
    sp.add_argument("--out", help="write to file instead of stdout")
    sp.set_defaults(func=cmd_series)

    tp = sub.add_parser("table", help="export a basis table")
    tp.add_argument("--level", type=int, required=True)
    tp.add_argument("--max-index", type=int, required=True)
    tp.add_argument("--prec", type=int, required=True)
    tp.add_argument("--range", help="restrict exported exponents to a..b")
    tp.add_argument("--format", choices=("csv", "json"), default="csv")
    tp.add_argument("--out", help="write to file instead of stdout")
    tp.set_defaults(func=cmd_table)

    vp = sub.add_parser("verify", help="run verification suites")
    vp.add_argument("suite", choices=list(congruences.SUITE_ORDER) + ["all"])
    for flag in ("nMax", "pMax", "aMax", "alphaMax", "betaMax", "mMax",
                 "bound", "p", "N", "window", "prec"):
        vp.add_argument(f"--{flag}", type=int, default=None)
    vp.add_argument("--out", help="directory for report files and figures")
    vp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    vp.add_argument("--jobs", type=int, default=1, help="parallel suite workers")
    vp.add_argument("--no-figures", action="store_true",
                    help="skip rendering PNG figures next to reports")
    vp.set_defaults(func=cmd_verify)

    sv = sub.add_parser("seed-validate", help="validate a newform seed file")
    sv.add_argument("path")
    sv.add_argument("--level", type=int, default=None,
                    help="require the seed to be for this level")
    sv.set_defaults(func=cmd_seed_validate)
    return ap


def run(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    # join "--range -1..3" so argparse does not read the value as a flag
    argv = list(argv)
    for i in range(len(argv) - 1, 0, -1):
        if argv[i - 1] == "--range" and ".." in argv[i]:
            argv[i - 1:i + 1] = [f"--range={argv[i]}"]
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except QcongError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
