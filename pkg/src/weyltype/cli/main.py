"""``weyltype`` command line: evaluation, module actions, checks and classification."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ..checks import SUITES, run_suite
from ..classify import ActionTable, recognize, solve_p1, table_from_spec
from ..classify.solver import LETTERS, SolverError
from ..classify.table import WindowError, generator_label
from ..repmod import act
from ..scalars import Scalar
from ..weyl import AlgebraElement, ExtendedElement
from . import persist
from .parser import EvalError, Evaluator, ParseError, evaluate, parse

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, text: str, doc) -> None:
    if args.format == "json":
        sys.stdout.write(persist.dumps(doc))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _value_doc(v):
    if isinstance(v, Scalar):
        return {"scalar": str(v)}
    return persist.element_to_json(v)


def _value_text(v) -> str:
    return str(v)


def _evaluate(args, ctx, text):
    try:
        return evaluate(text, ctx, central=getattr(args, "central", False))
    except (ParseError, EvalError) as exc:
        raise UsageError(str(exc)) from None


# -- commands ------------------------------------------------------------------


def cmd_eval(args, ctx):
    v = _evaluate(args, ctx, args.expr)
    _emit(args, _value_text(v), _value_doc(v))
    return EXIT_OK


def cmd_bracket(args, ctx):
    v = _evaluate(args, ctx, f"[{args.x}, {args.y}]")
    _emit(args, _value_text(v), _value_doc(v))
    return EXIT_OK


def cmd_act(args, ctx):
    spec = persist.spec_from_json(persist.read_json(args.module), ctx)
    vec = persist.vector_from_json(persist.read_json(args.vector), ctx)
    x = _evaluate(args, ctx, args.expr)
    if isinstance(x, Scalar):
        x = AlgebraElement.scalar(ctx, x)
    if isinstance(x, ExtendedElement):
        x = x.body  # C acts as zero
    out = act(spec, x, vec)
    _emit(args, persist.format_vector(out), persist.vector_to_json(out, ctx))
    return EXIT_OK


def cmd_verify(args, ctx):
    result = run_suite(args.suite, args.trials, args.seed)
    lines = [result.summary()] + result.failures[: args.show]
    doc = {
        "suite": result.suite,
        "seed": result.seed,
        "trials": result.trials,
        "passed": result.passed,
        "status": "PASS" if result.ok else "FAIL",
        "failures": result.failures[: args.show],
    }
    _emit(args, "\n".join(lines), doc)
    return EXIT_OK if result.ok else EXIT_FAIL


def _matrix_text(m) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in m.rows) + "]"


def cmd_classify(args, ctx):
    table = ActionTable.from_json(persist.read_json(args.table), ctx)
    found = recognize(table)
    lines = [str(found)]
    if found.G is not None:
        for k, g in enumerate(found.G, 1):
            lines.append(f"G{k} = {_matrix_text(g)}")
    _emit(args, "\n".join(lines), found.to_json())
    return EXIT_OK


def cmd_table(args, ctx):
    spec = persist.spec_from_json(persist.read_json(args.module), ctx)
    table = table_from_spec(spec, args.window)
    if args.format == "json":
        sys.stdout.write(persist.dumps(table.to_json()))
    else:
        for (key, beta), m in table.entries():
            sys.stdout.write(f"{generator_label(ctx, key)} @ ({', '.join(map(str, beta))}): {_matrix_text(m)}\n")
    return EXIT_OK


def cmd_solve(args, ctx):
    fixed = Fraction(args.c) if args.c is not None else None
    report = solve_p1(args.range, fixed_c=fixed, identities=args.identities)
    lines = [f"families: {len(report.families)}"]
    if report.eliminant:
        lines.append(f"eliminant: {report.eliminant}")
    if report.infeasible:
        lines.append("infeasible c: " + ", ".join(str(c) for c in report.infeasible))
    for fam in report.families:
        lines.append(f"c = {fam.c} ({fam.kind})")
        for L in LETTERS:
            vals = [str(fam.values.get((L, i), "?")) for i in range(-fam.K, fam.K + 1)]
            lines.append(f"  {L}[{-fam.K}..{fam.K}] = {', '.join(vals)}")
        if fam.free:
            lines.append("  free: " + ", ".join(fam.free))
    if args.log:
        lines.append("derivation:")
        lines.extend(report.log)
    _emit(args, "\n".join(lines), report.to_json())
    return EXIT_OK if report.families or fixed is not None else EXIT_FAIL


def cmd_repl(args, ctx, stdin=None):
    stdin = stdin or sys.stdin
    interactive = stdin.isatty()
    ev = Evaluator(ctx, central=args.central)
    while True:
        if interactive:
            sys.stdout.write("> ")
            sys.stdout.flush()
        line = stdin.readline()
        if not line:
            break
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in (":q", "quit", "exit"):
            break
        try:
            v = ev(parse(line))
        except (ParseError, EvalError, ZeroDivisionError) as exc:
            sys.stdout.write(f"error: {exc}\n")
            continue
        if args.format == "json":
            sys.stdout.write(json.dumps(_value_doc(v)) + "\n")
        else:
            sys.stdout.write(_value_text(v) + "\n")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--context", help=f"group context JSON (default: ${persist.CONTEXT_ENV}, else Z)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="weyltype", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    s.add_argument("expr")
    s.add_argument("--central", action="store_true", help="bracket in the central extension (n = 1)")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("bracket", parents=[common], help="Lie bracket of two expressions")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--central", action="store_true")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("act", parents=[common], help="act with an element on a module vector")
    s.add_argument("expr")
    s.add_argument("--module", required=True)
    s.add_argument("--vector", required=True)
    s.set_defaults(func=cmd_act)

    s = sub.add_parser("verify", parents=[common], help="run a seeded property suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--show", type=int, default=5, help="failures to print")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classify", parents=[common], help="recognize an action table")
    s.add_argument("--table", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("table", parents=[common], help="action table of a module on a window")
    s.add_argument("--module", required=True)
    s.add_argument("--window", type=int, default=2)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("solve-p1", parents=[common], help="solve the one-dimensional constraint system")
    s.add_argument("--range", type=int, default=6, dest="range")
    s.add_argument("--c", help="fix the scalar of t^0 (rational)")
    s.add_argument("--identities", choices=("pairs", "classical"), default="pairs")
    s.add_argument("--log", action="store_true", help="print the derivation log")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("repl", parents=[common], help="read expressions from standard input")
    s.add_argument("--central", action="store_true")
    s.set_defaults(func=cmd_repl)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = persist.load_context(args.context)
        return args.func(args, ctx)
    except (UsageError, WindowError, SolverError, KeyError, ValueError, OSError) as exc:
        sys.stderr.write(f"weyltype: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
