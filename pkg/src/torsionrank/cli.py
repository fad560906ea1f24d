"""Command line interface: ``torsionrank verify|suite|table|chars|selfcheck``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .balls import DEFAULT_PREC
from .certificate import (
    EXIT_INCONSISTENT,
    EXIT_PASS,
    certificate_json,
    exit_code,
    format_suite,
    run_suite,
    run_verify,
)

PREC_ENV = "TORSIONRANK_PREC"


def default_precision() -> int:
    raw = os.environ.get(PREC_ENV)
    if not raw:
        return DEFAULT_PREC
    try:
        bits = int(raw)
    except ValueError:
        raise SystemExit(f"{PREC_ENV} must be an integer, got {raw!r}")
    if bits < 16:
        raise SystemExit(f"{PREC_ENV} must be at least 16")
    return bits


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _certificate_csv(cert: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "verdict", "status"])
    for name, v in cert["verdicts"].items():
        w.writerow([cert["n"], cert["k"], name, v["status"]])
    w.writerow([cert["n"], cert["k"], "pass", str(cert["pass"]).lower()])
    return buf.getvalue()


def cmd_verify(args) -> int:
    cert = run_verify(args.n, args.k, args.prec, timing=args.timing)
    text = certificate_json(cert) if args.format == "json" else _certificate_csv(cert)
    _emit(text, args.out)
    return exit_code(cert)


def cmd_suite(args) -> int:
    rows, prop, code = run_suite(args.max_n, args.max_k, args.prec, args.jobs, properties=not args.no_properties)
    sys.stdout.write(format_suite(rows, prop))
    return code


def cmd_table(args) -> int:
    from .torsion import build_T

    T = build_T(args.n, args.k, args.prec)
    if args.format == "json":
        text = json.dumps(T.to_json(), indent=2, ensure_ascii=False) + "\n"
    else:
        text = "".join(f"# {part}\n{T.to_csv(part)}" for part in ("complex", "re", "im"))
    _emit(text, args.out)
    return EXIT_PASS


def cmd_chars(args) -> int:
    from .characters import enumerate_characters

    text = json.dumps(enumerate_characters(args.n).to_dict(), indent=2, ensure_ascii=False) + "\n"
    _emit(text, args.out)
    return EXIT_PASS


def cmd_selfcheck(args) -> int:
    from .properties import run_selfcheck

    ok = True
    for r in run_selfcheck(quick=args.quick, only=args.only):
        ok &= r.passed
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name}: {status} ({r.checked} checks, {r.seconds:.1f}s)")
        for f in r.failures:
            print(f"  failed: {f}")
    return EXIT_PASS if ok else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    prec = default_precision()
    p = argparse.ArgumentParser(prog="torsionrank", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="certify one (n, k) and emit the certificate")
    v.add_argument("--n", type=_positive, required=True)
    v.add_argument("--k", type=_positive, required=True)
    v.add_argument("--prec", type=_positive, default=prec, help=f"bits (default {prec}, env {PREC_ENV})")
    v.add_argument("--out", default=None, help="output path (default stdout)")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--timing", action="store_true", help="add wall-clock time (breaks byte-identical output)")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", help="verify the whole grid and run the property suites")
    s.add_argument("--max-n", type=_positive, default=24)
    s.add_argument("--max-k", type=_positive, default=3)
    s.add_argument("--prec", type=_positive, default=prec)
    s.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: CPU count)")
    s.add_argument("--no-properties", action="store_true", help="skip the property suites")
    s.set_defaults(func=cmd_suite)

    t = sub.add_parser("table", help="export T and its real and imaginary parts")
    t.add_argument("--n", type=_positive, required=True)
    t.add_argument("--k", type=_positive, required=True)
    t.add_argument("--prec", type=_positive, default=prec)
    t.add_argument("--format", choices=("json", "csv"), default="csv")
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_table)

    c = sub.add_parser("chars", help="export the character table mod n")
    c.add_argument("--n", type=_positive, required=True)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_chars)

    sc = sub.add_parser("selfcheck", help="run every property suite")
    sc.add_argument("--quick", action="store_true", help="smaller grids for the numeric suites")
    sc.add_argument("--only", action="append", help="restrict to a suite (repeatable)")
    sc.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
