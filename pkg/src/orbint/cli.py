"""Command line interface.

Subcommands: invariants, orbital, verify-ls, verify-nonstandard, corpus,
formulas.  Exit code is 0 iff every case passed; nonzero otherwise with a
summary line on stderr.  FLCHECK_PRECISION_CAP overrides the hard
precision cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import OrbintError, ParseError
from .flcheck import (
    canonical_report_hash,
    global_formulas,
    parse_case,
    reports_to_csv,
    reports_to_jsonl,
    run_case,
    run_corpus,
)
from .rootdata import build_root_datum


def _load_cases(paths):
    cases = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        data = json.loads(text)
        if isinstance(data, list):
            cases.extend(parse_case(d) for d in data)
        else:
            cases.append(parse_case(data))
    return cases


def _emit(reports, args):
    text = reports_to_csv(reports) if args.format == "csv" else reports_to_jsonl(reports)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(reports, errors=()):
    failed = [r for r in reports if not r.passed]
    if errors:
        for cid, kind, msg in errors:
            print(f"error: {cid}: {kind}: {msg}", file=sys.stderr)
    if failed or errors:
        print(
            f"FAIL: {len(failed)} failing, {len(errors)} errored, "
            f"{len(reports)} reports",
            file=sys.stderr,
        )
        return 1
    print(f"ok: {len(reports)} reports, hash {canonical_report_hash(reports)[:16]}",
          file=sys.stderr)
    return 0


def _case_command(mode):
    def run(args):
        cases = _load_cases(args.cases)
        reports = []
        errors = []
        for case in cases:
            if args.precision:
                case.precision = args.precision
            try:
                reports.append(run_case(case, mode=mode))
            except OrbintError as ex:
                errors.append((case.case_id, type(ex).__name__, str(ex)))
        _emit(reports, args)
        return _finish(reports, errors)

    return run


def _corpus_command(args):
    kwargs = dict(q=args.q, kind=args.kind, n=args.n, depth=args.depth)
    if args.kappa:
        from fractions import Fraction

        kwargs["kappa"] = tuple(Fraction(x) for x in args.kappa.split(","))
    reports, errors = run_corpus(args.seed, args.count, mode=args.mode, **kwargs)
    _emit(reports, args)
    return _finish(reports, errors)


def _formulas_command(args):
    rd = build_root_datum(args.kind, args.n, args.p)
    out = global_formulas(rd, args.genus, args.degD)
    text = json.dumps(out, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="flcheck", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp, cases=True):
        if cases:
            sp.add_argument("cases", nargs="+", help="case file(s), JSON")
        sp.add_argument("--precision", type=int, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=["json", "csv"], default="json")

    for name, mode in [
        ("invariants", "invariants"),
        ("orbital", "orbital"),
        ("verify-ls", "ls"),
        ("verify-nonstandard", "nonstandard"),
    ]:
        sp = sub.add_parser(name)
        add_common(sp)
        sp.set_defaults(func=_case_command(mode))

    sp = sub.add_parser("corpus")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--count", type=int, default=50)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--kind", choices=["GL", "SL", "PGL"], default="SL")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--mode", choices=["invariants", "orbital", "nonstandard"],
                    default="invariants")
    sp.add_argument("--kappa", default=None, help="comma-separated fractions")
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(func=_corpus_command)

    sp = sub.add_parser("formulas")
    sp.add_argument("--kind", choices=["GL", "SL", "PGL"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, default=5)
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--degD", type=int, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_formulas_command)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as ex:
        print(f"parse error: {ex}", file=sys.stderr)
        return 2
    except OrbintError as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
