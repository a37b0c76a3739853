"""qnrforge command line.

Exit codes: 0 success, 1 invalid input, 2 the requested method failed,
3 the conformance sweep found anomalies.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import bench_randomized
from .conformance import CHECKS, run_conformance
from .cyclo import coperiod_polynomial, period_polynomial, period_spec
from .engine import METHODS, construct_qnr
from .errors import (
    ConstructionFailed,
    FallbackExhausted,
    NoParametersFound,
    NoShortcut,
    QnrError,
)
from .ffcore import FieldDescriptor, check_odd_prime, poly_normalize
from .irrpoly import binomial_tower
from .roots import sqrt_mod
from .symbols import jacobi

EXIT_OK, EXIT_INPUT, EXIT_METHOD, EXIT_ANOMALY = 0, 1, 2, 3

METHOD_FAILURES = (FallbackExhausted, NoParametersFound, NoShortcut, ConstructionFailed)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_poly(text: str) -> tuple[int, ...]:
    """'-1,1,1' -> (-1, 1, 1), lowest degree first."""
    try:
        coeffs = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise UsageError(f"bad polynomial {text!r}; expected comma-separated integers") from None
    return coeffs


def format_poly(coeffs) -> str:
    return ",".join(str(c) for c in coeffs)


def _field(args) -> FieldDescriptor:
    ext = parse_poly(args.ext_modulus) if getattr(args, "ext_modulus", None) else None
    return FieldDescriptor(args.modulus, ext)


def cmd_qnr(args, out):
    cert = construct_qnr(_field(args), args.method)
    if not cert.verified:
        raise FallbackExhausted(f"method {args.method} returned an unverified value", cert.transcript)
    if args.json:
        print(cert.to_json(), file=out)
    else:
        print(cert.value, file=out)


def cmd_sqrt(args, out):
    check_odd_prime(args.modulus)
    res = sqrt_mod(args.value, args.modulus, method=args.method)
    print(f"{res.root} {res.other_root}", file=out)
    for note in res.notes:
        print(f"note: {note}", file=sys.stderr)


def cmd_period(args, out):
    spec = period_spec(args.r, args.degree)
    if args.theta:
        poly = coperiod_polynomial(args.r, args.degree, spec.subgroup)
    else:
        poly = period_polynomial(args.r, args.degree, spec.subgroup)
    coeffs = poly.coeffs
    if args.over is not None:
        check_odd_prime(args.over)
        coeffs = poly_normalize(coeffs, args.over)
    print(format_poly(coeffs), file=out)


def cmd_symbol(args, out):
    print(jacobi(args.a, args.n), file=out)


def cmd_irr(args, out):
    fd = FieldDescriptor(args.modulus)
    z = construct_qnr(fd, "auto").value
    res = binomial_tower(fd, args.log2_degree, z)
    print(format_poly(res.poly), file=out)


def cmd_conformance(args, out):
    report = run_conformance(args.max_prime, args.checks)
    text = report.to_json(indent=2)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    print(text, file=out)
    return EXIT_ANOMALY if report.anomalies else EXIT_OK


def cmd_bench(args, out):
    report = bench_randomized(args.bits, args.count, args.seed)
    # wall times differ run to run, so they go to stderr
    print(report.to_json(timings=False), file=out)
    print(json.dumps(report.timings, sort_keys=True), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qnrforge", description="Deterministic quadratic nonresidues and friends.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("qnr", help="construct a certified nonresidue")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--ext-modulus", help="monic odd-degree irreducible over F_p, e.g. 1,2,0,1")
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_qnr)

    p = sub.add_parser("sqrt", help="square root modulo a prime")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--value", type=int, required=True)
    p.add_argument("--method", choices=("tonelli", "cipolla"), default="tonelli")
    p.set_defaults(func=cmd_sqrt)

    p = sub.add_parser("period", help="period or coperiod polynomial")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--theta", action="store_true")
    p.add_argument("--over", type=int)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("symbol", help="Jacobi symbol (a/n)")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("irr", help="irreducible polynomial of degree 2^e")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--log2-degree", type=int, required=True)
    p.set_defaults(func=cmd_irr)

    p = sub.add_parser("conformance", help="re-check invariants over a prime range")
    p.add_argument("--max-prime", type=int, required=True)
    p.add_argument("--checks", default="all", help=f"comma list from: {', '.join(CHECKS)}")
    p.add_argument("--report")
    p.set_defaults(func=cmd_conformance)

    p = sub.add_parser("bench", help="randomized baseline")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        code = args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except METHOD_FAILURES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_METHOD
    except (QnrError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
