"""Command-line entry point.

Parses the input polynomial and linear form, runs the symbolic pipeline
(drawing a generic linear form when none is given), optionally verifies
the result with the numeric oracle, and prints the report as text or
canonical JSON.

Exit codes: 0 success; 2 parse error; 3 genericity exhausted;
4 oracle mismatch; 1 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys

from .fields import rat
from .poly import PolyParseError, parse_poly
from .polar import GenericityError, LinearForm
from .morse import analyze_symbolic
from .oracle import DEFAULT_SCHEDULE, classify_trajectories
from .report import to_json, to_text

VARIABLES = ("x", "y")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_GENERICITY = 3
EXIT_MISMATCH = 4


def _parse_ell(text):
    """A linear form given as a polynomial expression in x and y."""
    p = parse_poly(text, VARIABLES)
    if p.total_degree() > 1 or not p.field.is_zero(p.constant_term()):
        raise PolyParseError("the linear form must be a*x + b*y", 0)
    a = p.terms.get((1, 0), rat(0))
    b = p.terms.get((0, 1), rat(0))
    return LinearForm(rat(a), rat(b))


def _parse_schedule(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        out.append(rat(*_decimal_to_rat(part)))
    if len(out) < 3:
        raise ValueError("the schedule needs at least 3 values")
    return out


def _decimal_to_rat(text):
    """Exact rational value of a decimal/scientific literal like 1e-3."""
    mant, _, exp = text.lower().partition("e")
    exp = int(exp) if exp else 0
    whole, _, frac = mant.partition(".")
    digits = (whole or "0") + frac
    num = int(digits)
    exp -= len(frac)
    if exp >= 0:
        return num * 10 ** exp, 1
    return num, 10 ** (-exp)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="polarmorse",
        description="Attractors and indices of Morse points of f - t*ell "
                    "for a bivariate polynomial f.")
    ap.add_argument("--f", required=True, help="polynomial in x and y")
    ap.add_argument("--ell", default=None, help="linear form a*x + b*y "
                    "(drawn from --seed when omitted)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--verify", action="store_true",
                    help="run the numeric oracle and diff the counts")
    ap.add_argument("--t-schedule", default=None,
                    help='comma-separated t values, e.g. "1e-2,1e-3,1e-4"')
    ap.add_argument("--precision", type=int, default=256, help="bits")
    ap.add_argument("--max-redraws", type=int, default=16)
    return ap


def run(args):
    try:
        f = parse_poly(args.f, VARIABLES)
        ell = _parse_ell(args.ell) if args.ell is not None else None
        schedule = _parse_schedule(args.t_schedule) if args.t_schedule \
            else list(DEFAULT_SCHEDULE)
    except (PolyParseError, ValueError) as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE

    try:
        report = analyze_symbolic(f, ell=ell, seed=args.seed,
                                  max_redraws=args.max_redraws)
    except GenericityError as exc:
        print("genericity failure: %s" % exc, file=sys.stderr)
        return EXIT_GENERICITY
    except ValueError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except (ArithmeticError, AssertionError) as exc:
        print("internal error: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL

    code = EXIT_OK
    if args.verify:
        try:
            verdict = classify_trajectories(f, report.ell, schedule, report,
                                            precision=args.precision)
        except (ArithmeticError, ValueError) as exc:
            print("internal error: %s" % exc, file=sys.stderr)
            return EXIT_INTERNAL
        report.verification = verdict
        if not verdict.matched:
            code = EXIT_MISMATCH

    if args.format == "json":
        print(to_json(report, VARIABLES))
    else:
        print(to_text(report, VARIABLES), end="")
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
