"""Command-line front end.

Exit codes: 0 success or Equal, 1 NotEqual (or a failed axiom), 2 Unknown,
fuel exhausted or clipped, 64 parse or usage error.
"""

from __future__ import annotations

import argparse
import sys

from . import axioms, dmodel, rewrite, translate
from .mrel import GenParams
from .rewrite import Verdict
from .syntax import ParseError, parse, show
from .taylor import TaylorBudget, TaylorFuelExhausted, taylor_eq, taylor_expand, taylor_nf

EXIT_OK, EXIT_NOT_EQUAL, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64
VERDICT_EXIT = {Verdict.EQUAL: EXIT_OK, Verdict.NOT_EQUAL: EXIT_NOT_EQUAL, Verdict.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("-")
    try:
        pair = (int(lo), int(hi or lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO-HI, got {text!r}")
    if pair[0] < 0 or pair[0] > pair[1]:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return pair


def _let(text: str) -> tuple[str, str]:
    name, sep, body = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=TERM, got {text!r}")
    return name.strip(), body


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--let", action="append", type=_let, default=[], metavar="NAME=TERM",
                        help="textual abbreviation, expanded before parsing (repeatable)")
    calc = _Parser(add_help=False)
    calc.add_argument("--calculus", choices=("diff", "res"), default="diff")
    fuel = _Parser(add_help=False)
    fuel.add_argument("--fuel", type=int, default=rewrite.DEFAULT_FUEL)
    budget = _Parser(add_help=False)
    budget.add_argument("--degree", type=int, default=3, help="Taylor truncation degree K")
    budget.add_argument("--size-cap", type=int, default=64)
    model = _Parser(add_help=False)
    model.add_argument("--vars", default="", help="comma-separated variable list")
    model.add_argument("--size", type=int, default=8, help="output bound B")
    model.add_argument("--witness", type=int, default=16, help="witness bound W")
    model.add_argument("--normalize", action="store_true", help="normalize before interpreting")

    p = _Parser(prog="difflambda", description="Differential lambda-calculus workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", parents=[common, calc], help="print the canonical form")
    sp.add_argument("term")

    sp = sub.add_parser("reduce", parents=[common, calc, fuel], help="normalize a term")
    sp.add_argument("--eta", action="store_true")
    sp.add_argument("--strategy", choices=("outermost", "innermost", "head"), default="outermost")
    sp.add_argument("term")

    sp = sub.add_parser("eq", parents=[common, calc, fuel], help="compare normal forms")
    sp.add_argument("--eta", action="store_true")
    sp.add_argument("--idempotent", action="store_true", help="compare with idempotent sums")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = sub.add_parser("taylor", parents=[common, budget], help="truncated Taylor expansion")
    sp.add_argument("--nf", action="store_true", help="also normalize the expansion")
    sp.add_argument("term")

    sp = sub.add_parser("taylor-eq", parents=[common, budget, fuel], help="compare Taylor normal forms")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = sub.add_parser("interp", parents=[common, model, fuel], help="bounded interpretation (JSON)")
    sp.add_argument("term")

    sp = sub.add_parser("interp-eq", parents=[common, model, fuel], help="compare interpretations")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = sub.add_parser("translate", parents=[common, fuel], help="translate between the calculi")
    sp.add_argument("--to", choices=("diff", "res"), required=True)
    sp.add_argument("--roundtrip", action="store_true", help="also check the round trip")
    sp.add_argument("term")

    sp = sub.add_parser("axioms", help="randomized checks of the model laws")
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--atoms", type=_range, default=(1, 4), metavar="LO-HI")
    sp.add_argument("--mset", type=_range, default=(0, 3), metavar="LO-HI")
    sp.add_argument("--rel", type=_range, default=(0, 6), metavar="LO-HI")
    sp.add_argument("--only", default="", help="comma-separated law names")
    return p


def _read(text: str, stdin) -> str:
    return stdin.read() if text == "-" else text


def _vars(text: str) -> tuple:
    return tuple(v for v in text.replace(",", " ").split() if v)


def run(argv, stdin=None, out=None, err=None) -> int:
    stdin = stdin or sys.stdin
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args, stdin, out)
    except UsageError as e:
        print(e, file=err)
        return EXIT_USAGE
    except ParseError as e:
        print(f"parse error: {e}", file=err)
        return EXIT_USAGE
    except dmodel.InadequateVariables as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE


def _dispatch(args, stdin, out) -> int:
    lets = args.let if hasattr(args, "let") else []

    def term(text, calculus="diff"):
        return parse(_read(text, stdin), calculus, lets)

    cmd = args.command
    if cmd == "parse":
        print(show(term(args.term, args.calculus)), file=out)
        return EXIT_OK

    if cmd == "reduce":
        s = term(args.term, args.calculus)
        if args.calculus == "diff":
            nf, exhausted = rewrite.normalize_diff(s, args.fuel, args.eta, args.strategy)
        else:
            nf, exhausted = rewrite.normalize_res(s, args.fuel, args.eta)
        print(show(nf), file=out)
        return EXIT_UNKNOWN if exhausted else EXIT_OK

    if cmd == "eq":
        a, b = term(args.left, args.calculus), term(args.right, args.calculus)
        check = rewrite.theory_eq_diff if args.calculus == "diff" else rewrite.theory_eq_res
        v = check(a, b, args.fuel, args.eta, args.idempotent)
        print(v, file=out)
        return VERDICT_EXIT[v]

    if cmd == "taylor":
        budget = TaylorBudget(args.degree, args.size_cap)
        exp, clipped = taylor_expand(term(args.term), budget)
        if args.nf:
            try:
                exp = taylor_nf(exp)
            except TaylorFuelExhausted:
                clipped = True
        print(show(exp), file=out)
        return EXIT_UNKNOWN if clipped else EXIT_OK

    if cmd == "taylor-eq":
        budget = TaylorBudget(args.degree, args.size_cap)
        v = taylor_eq(term(args.left), term(args.right), budget, args.fuel)
        print(v, file=out)
        return VERDICT_EXIT[v]

    if cmd in ("interp", "interp-eq"):
        budgets = dmodel.Budgets(args.size, args.witness)
        xs = _vars(args.vars)
        if cmd == "interp":
            r = dmodel.interpret(term(args.term), xs, budgets, args.normalize, args.fuel)
            print(dmodel.to_json(r.entries), file=out)
            return EXIT_UNKNOWN if r.clipped else EXIT_OK
        v = dmodel.interp_eq(term(args.left), term(args.right), xs, budgets, args.normalize, fuel=args.fuel)
        print(v, file=out)
        return VERDICT_EXIT[v]

    if cmd == "translate":
        if args.to == "diff":
            m = term(args.term, "res")
            print(show(translate.to_diff(m)), file=out)
            v = translate.roundtrip_rd(m, args.fuel) if args.roundtrip else None
        else:
            s = term(args.term, "diff")
            print(show(translate.to_res(s)), file=out)
            v = translate.roundtrip_dr(s, args.fuel) if args.roundtrip else None
        if v is None:
            return EXIT_OK
        print(f"roundtrip {v}", file=out)
        return VERDICT_EXIT[v]

    if cmd == "axioms":
        names = [n for n in args.only.replace(",", " ").split() if n] or None
        unknown = [n for n in names or () if n not in axioms.LAWS]
        if unknown:
            raise UsageError(f"unknown law(s): {', '.join(unknown)}")
        params = GenParams(args.atoms, args.mset, args.rel)
        results = axioms.check_axioms(args.seed, args.trials, params, names)
        print(axioms.format_report(results), file=out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_NOT_EQUAL

    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
