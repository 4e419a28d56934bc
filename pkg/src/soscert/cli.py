"""Command-line interface.

Exit codes: 0 success; 1 parse or I/O error; 2 the requested certificate
cannot exist (failed mathematical precondition); 3 numerical exhaustion
(precision ceiling or feasibility solver gave up); 4 verification failure.

The environment variable SOS_CERT_MAX_BITS overrides the precision
ceiling of the rounding loops.
"""

from __future__ import annotations

import argparse
import sys

from . import certifier, problem_io, quotient, verify_bounds
from .errors import (ConditionFailed, Infeasible, MaxIterations,
                     NotStrictlyPositiveOnS, ParseError, PrecisionExceeded,
                     SosCertError)
from .polyring import height

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_IMPOSSIBLE = 2
EXIT_EXHAUSTED = 3
EXIT_VERIFY = 4


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read().replace("\r\n", "\n")


def _load_problem(path):
    return problem_io.parse_problem(_read(path))


def cmd_certify(args):
    inst = _load_problem(args.input)
    for key in ("mode", "engine", "order", "seed"):
        value = getattr(args, key)
        if value is not None:
            inst.options[key] = value
    if args.precision_start is not None:
        inst.options["precision_start"] = args.precision_start
    try:
        cert = certifier.certify(inst)
    except (ConditionFailed, NotStrictlyPositiveOnS) as exc:
        print(f"no certificate: {exc}", file=sys.stderr)
        return EXIT_IMPOSSIBLE
    except (PrecisionExceeded, Infeasible, MaxIterations) as exc:
        print(f"gave up: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    text = problem_io.format_certificate(cert, inst.var_names)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    report = verify_bounds.verify_certificate(inst, cert)
    print(report.to_text())
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_verify(args):
    inst = _load_problem(args.input)
    cert, _ = problem_io.parse_certificate(_read(args.certificate),
                                           expected_vars=inst.var_names)
    report = verify_bounds.verify_certificate(inst, cert)
    print(report.to_text())
    if report.identity_ok and report.weights_ok and report.mode_ok is not False:
        return EXIT_OK
    print(f"verification failed: {report.first_failure()}", file=sys.stderr)
    return EXIT_VERIFY


def cmd_bounds(args):
    inst = _load_problem(args.input)
    ring = quotient.monomial_basis(quotient.groebner(inst.h))
    report = verify_bounds.degree_bounds(inst, ring)
    print(report.to_text())
    if args.constant is not None:
        info = height(inst.f)
        tau = max(info.numerator_height + info.denominator_height, 1)
        hb = verify_bounds.height_bound_formula(
            inst.nvars, ring.D, max(ring.degree_of_basis(), 1), tau,
            max(inst.f.degree, 1), args.constant)
        print(hb.to_text())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="soscert",
        description="Exact rational weighted sum-of-squares certificates on "
                    "finite semialgebraic sets.",
        epilog="Polynomial grammar: rationals `num/den`, variables as declared, "
               "`*` products, `^` or `**` powers, e.g. `3/2*x1^2*x2 - x3 + 7`.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="compute a certificate")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["strict", "nonneg"])
    p.add_argument("--engine", choices=["constructive", "sdp"])
    p.add_argument("--order", type=int)
    p.add_argument("--precision-start", type=int, dest="precision_start")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="verify a certificate file exactly")
    p.add_argument("--input", required=True)
    p.add_argument("--certificate", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="print degree/height bound reports")
    p.add_argument("--input", required=True)
    p.add_argument("--constant", type=float)
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SosCertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IMPOSSIBLE


if __name__ == "__main__":
    sys.exit(main())
