"""Command line front end: ``gasub eval --sig P,Q,R "EXPR"``."""

from __future__ import annotations

import argparse
import os
import sys

from .algebra import Signature, ToleranceConfig
from .errors import GasubError
from .expr import ParseError, evaluate, format_result, parse
from .subspace import normalize

TOL_ENV = "GASUB_TOL"

EPILOG = """\
Generators are written e1..en whatever their square: in R(p,q,r) the first p
square to +1, the next q to -1 and the last r to 0.

Operators: + - and the products * (geometric), ^ (outer), | (left contraction).
The three products share one precedence level, bind tighter than + and -, and
associate to the left: e1^e2*e3 means (e1^e2)*e3.  A number may have an
exponent, so 2e1 is the number 20 (write 2*e1 for a scaled generator).

Functions: meet join delta idiv ljoin (2 args), lmeet (2 or 3 args; the third
defaults to pseudo()), grade(X, k), rev, inv, isblade, factor (1 arg),
proj(A, X), pseudo().

Exit status: 0 on success, 1 when evaluation fails, 2 on a syntax error.
"""


def _signature(text: str) -> Signature:
    try:
        parts = [int(x) for x in text.split(",")]
        if not 1 <= len(parts) <= 3:
            raise ValueError
        return Signature(*parts)
    except ValueError as exc:
        detail = f": {exc}" if str(exc) else ""
        raise argparse.ArgumentTypeError(f"expected P,Q,R with small nonnegative integers{detail}") from None


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gasub", description="Subspace operations on blades.")
    sub = parser.add_subparsers(dest="command", required=True)
    ev = sub.add_parser(
        "eval",
        help="evaluate an expression",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ev.add_argument("--sig", required=True, type=_signature, metavar="P,Q,R", help="signature of the algebra")
    ev.add_argument("--json", action="store_true", help="print the result as JSON")
    ev.add_argument("--normalize", action="store_true",
                    help="scale to unit coefficient norm with the first coefficient positive")
    ev.add_argument("--tol", type=_positive, metavar="REL",
                    help=f"relative zero threshold (default: ${TOL_ENV} or 1e-10)")
    ev.add_argument("expression", metavar="EXPR")
    return parser


def _tolerance(args, parser) -> ToleranceConfig:
    rel = args.tol
    if rel is None and os.environ.get(TOL_ENV):
        try:
            rel = _positive(os.environ[TOL_ENV])
        except argparse.ArgumentTypeError as exc:
            parser.error(f"{TOL_ENV}: {exc}")
    return ToleranceConfig() if rel is None else ToleranceConfig(rel_eps=rel)


def run_eval(args, parser) -> int:
    tol = _tolerance(args, parser)
    try:
        tree = parse(args.expression)
    except ParseError as exc:
        print(f"gasub: syntax error {exc}", file=sys.stderr)
        print(f"  {args.expression}", file=sys.stderr)
        caret = len(args.expression.encode("utf-8")[: exc.offset].decode("utf-8", "replace"))
        print("  " + " " * caret + "^", file=sys.stderr)
        return 2
    try:
        value = evaluate(tree, args.sig, tol)
    except (GasubError, ValueError) as exc:
        print(f"gasub: {exc}", file=sys.stderr)
        return 1
    if args.normalize and not isinstance(value, list):
        value = normalize(value)
    print(format_result(value, "json" if args.json else "plain"))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eval":
        return run_eval(args, parser)
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
