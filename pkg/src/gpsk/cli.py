"""Command-line entry point: ``gpsk {scan,point,crossing,verify}``.

Exit codes: 0 success, 1 verification failure, 2 argument error,
3 unreachable mean photon number.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys

import numpy as np

from .errors import ConvergenceError, DomainError, UnreachableTargetError
from .scan import find_crossing, point, scan, write_csv
from .states import DEFAULT_TAIL_TOL, Family, FamilySpec
from .verification import DEFAULT_N_SYMBOLS, default_families, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_UNREACHABLE = 3

FAMILY_LABELS = [f.value for f in Family]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _family_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--family", choices=FAMILY_LABELS, required=required)
    p.add_argument("--param", type=float, default=None,
                   help="n_tilde for oscs, sigma for pcs/bgcs; ignored otherwise")
    p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL,
                   help="Fock truncation tolerance on the discarded probability")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gpsk", description="Helstrom bounds for generalized-coherent-state PSK")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan", help="error probability over a <n> grid, as CSV")
    _family_args(p)
    p.add_argument("--n-symbols", type=int, required=True)
    p.add_argument("--mean-min", type=float, default=0.0)
    p.add_argument("--mean-max", type=float, default=1.2)
    p.add_argument("--steps", type=int, default=120)
    p.add_argument("--with-baseline", action="store_true", help="add the standard-state error column")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-", help="output path (default stdout)")

    p = sub.add_parser("point", help="all diagnostics at one <n>, as JSON")
    _family_args(p)
    p.add_argument("--n-symbols", type=int, required=True)
    p.add_argument("--mean-n", type=float, required=True)
    p.add_argument("--verify", action="store_true", help="run the measurement oracle too")
    p.add_argument("--out", default="-")

    p = sub.add_parser("crossing", help="where the family crosses the standard error curve")
    _family_args(p)
    p.add_argument("--n-symbols", type=int, required=True)
    p.add_argument("--mean-min", type=float, default=0.05)
    p.add_argument("--mean-max", type=float, default=1.2)
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="run the consistency suites over a grid")
    _family_args(p, required=False)
    p.add_argument("--n-symbols", type=int, action="append", default=None,
                   help="restrict to these N (repeatable)")
    p.add_argument("--mean-min", type=float, default=0.0)
    p.add_argument("--mean-max", type=float, default=1.2)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--out", default="-")
    return parser


def _family(args) -> FamilySpec:
    return FamilySpec.from_label(args.family, args.param if Family(args.family) in _PARAM_FAMILIES else None)


_PARAM_FAMILIES = (Family.OPTICAL_SPIN, Family.PERELOMOV, Family.BARUT_GIRARDELLO)


@contextlib.contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _check_tail_tol(tol: float) -> None:
    if not 0 < tol < 1:
        raise DomainError(f"--tail-tol must lie in (0, 1), got {tol}")


def cmd_scan(args) -> int:
    family = _family(args)
    if args.workers < 1:
        raise DomainError("--workers must be >= 1")
    rows = scan(family, args.n_symbols, args.mean_min, args.mean_max, args.steps,
                with_baseline=args.with_baseline, tail_tol=args.tail_tol, workers=args.workers)
    with _output(args.out) as fh:
        write_csv(rows, fh)
    return EXIT_OK


def cmd_point(args) -> int:
    out = point(_family(args), args.n_symbols, args.mean_n, verify=args.verify, tail_tol=args.tail_tol)
    with _output(args.out) as fh:
        fh.write(json.dumps(out) + "\n")
    return EXIT_OK


def cmd_crossing(args) -> int:
    report = find_crossing(_family(args), args.n_symbols, args.mean_min, args.mean_max, tail_tol=args.tail_tol)
    with _output(args.out) as fh:
        fh.write(json.dumps(report.to_dict()) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.family is None:
        if args.param is not None:
            raise DomainError("--param needs --family")
        families = default_families()
    elif args.param is None and Family(args.family) in _PARAM_FAMILIES:
        families = [f for f in default_families() if f.label == args.family]
    else:
        families = [_family(args)]
    if args.steps < 1 or not 0 <= args.mean_min <= args.mean_max:
        raise DomainError("need steps >= 1 and 0 <= mean-min <= mean-max")
    grid = tuple(np.linspace(args.mean_min, args.mean_max, args.steps))
    n_symbols = tuple(args.n_symbols) if args.n_symbols else DEFAULT_N_SYMBOLS
    for n in n_symbols:
        if n < 2:
            raise DomainError(f"--n-symbols must be >= 2, got {n}")
    summary = run_verification(families, n_symbols, grid, args.tail_tol)
    with _output(args.out) as fh:
        fh.write(summary.table() + "\n")
        if summary.passed:
            fh.write("all suites passed\n")
        else:
            fh.write("FAILED: " + ", ".join(summary.failing) + "\n")
    return EXIT_OK if summary.passed else EXIT_VERIFY_FAILED


COMMANDS = {"scan": cmd_scan, "point": cmd_point, "crossing": cmd_crossing, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"gpsk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _check_tail_tol(args.tail_tol)
        return COMMANDS[args.command](args)
    except UnreachableTargetError as exc:
        print(f"gpsk: unreachable: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except DomainError as exc:
        print(f"gpsk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        # Perelomov targets too close to the pole run out of truncation room
        print(f"gpsk: unreachable: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE


if __name__ == "__main__":
    sys.exit(main())
