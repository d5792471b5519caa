"""Command-line front end.

Exit status: 0 and 1 carry the verdict of the query (separated / not
separated, derivable / not derivable, sweep passed / failed), 2 means the
input could not be parsed or was invalid, 3 means a size limit or search
budget was exceeded.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
from fractions import Fraction

from . import formats
from .causal import build_dag
from .errors import InputError, LogicError, ParseError, ResourceLimitError
from .gaussian import DEFAULT_RHO, construct_witness, verify_witness
from .graph import node_set
from .semigraphoid import CLOSURE_UNIVERSE_LIMIT, closure, derives
from .separation import d_separated, id_separated, requisite_nodes
from .verify import SWEEPS

EXIT_TRUE, EXIT_FALSE, EXIT_PARSE, EXIT_LIMIT = 0, 1, 2, 3


def _emit(args, human: str, structured):
    if args.format == "structured":
        print(json.dumps(structured, sort_keys=True))
    else:
        print(human)


def _read(path):
    try:
        return formats.read_text(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _separation(args, test):
    dag = formats.parse_dag(_read(args.dag))
    if args.batch:
        statements = [
            (no, formats.parse_statement(line, no))
            for no, line in enumerate(_read(args.batch).splitlines(), start=1)
            if line.split("#", 1)[0].strip()
        ]
    elif args.statement:
        statements = [(1, formats.parse_statement(args.statement))]
    else:
        raise InputError("give a statement or --batch FILE")
    status = EXIT_TRUE
    for _, s in statements:
        verdict = test(dag, s.x, s.z, s.y)
        if verdict.separated:
            human = f"{s} separated"
        else:
            status = EXIT_FALSE
            human = f"{s} not separated; active path {verdict.witness}"
        witness = list(verdict.witness.nodes) if verdict.witness else None
        _emit(args, human, {"statement": str(s), "separated": verdict.separated, "witness": witness})
    return status


def cmd_dsep(args):
    return _separation(args, d_separated)


def cmd_idsep(args):
    return _separation(args, id_separated)


def cmd_build(args):
    dag = build_dag(formats.parse_causal_list(_read(args.causal_list)))
    text = formats.format_dag(dag)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_TRUE


def _limit(args, default):
    return default if args.max_nodes is None else args.max_nodes


def cmd_closure(args):
    sset = formats.parse_statement_set(_read(args.statements))
    closed = closure(sset, _limit(args, CLOSURE_UNIVERSE_LIMIT))
    if args.format == "structured":
        sys.stdout.write(formats.format_statement_set(closed))
    else:
        stmts = sorted(closed.statements)
        print(f"{len(stmts)} statements over {' '.join(sorted(closed.universe))}")
        for s in stmts:
            print(f"  {s}")
    return EXIT_TRUE


def cmd_derives(args):
    sset = formats.parse_statement_set(_read(args.statements))
    goal = formats.parse_statement(args.goal)
    ok = derives(sset, goal, _limit(args, CLOSURE_UNIVERSE_LIMIT))
    _emit(args, f"{goal} {'derivable' if ok else 'not derivable'}", {"goal": str(goal), "derivable": ok})
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_counterexample(args):
    dag = formats.parse_dag(_read(args.dag))
    sigma = formats.parse_statement(args.statement)
    try:
        w = construct_witness(dag, sigma, args.rho)
    except LogicError as exc:
        _emit(args, str(exc), {"statement": str(sigma), "error": str(exc)})
        return EXIT_FALSE
    report = verify_witness(dag, w)
    sys.stdout.write(formats.format_witness(w, report))
    return EXIT_TRUE if report.passed else EXIT_FALSE


def cmd_verify(args):
    sweep = SWEEPS[args.sweep]
    params = inspect.signature(sweep).parameters
    kwargs = {}
    if args.max_nodes is not None:
        key = "n_vars" if "n_vars" in params else "max_nodes"
        kwargs[key] = args.max_nodes
    if args.seed is not None and "seed" in params:
        kwargs["seed"] = args.seed
    if args.count is not None and "count" in params:
        kwargs["count"] = args.count
    if args.rho is not None and "rho" in params:
        kwargs["rho"] = args.rho
    result = sweep(**kwargs)
    structured = {
        "sweep": result.name,
        "passed": result.passed,
        "checked": result.checked,
        "failures": result.failures,
        "details": result.details,
    }
    human = "\n".join([result.summary(), *("  " + f for f in result.failures)])
    _emit(args, human, structured)
    return EXIT_TRUE if result.passed else EXIT_FALSE


def cmd_requisite(args):
    dag = formats.parse_dag(_read(args.dag))
    x = node_set(args.x.split(",")) if args.x else frozenset()
    y = node_set(args.y.split(",")) if args.y else frozenset()
    nodes = sorted(requisite_nodes(dag, x, y))
    _emit(args, " ".join(nodes), {"x": sorted(x), "y": sorted(y), "requisite": nodes})
    return EXIT_TRUE


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--max-nodes", type=int, default=None, help="override the size limit")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--rho", type=_fraction, default=None, help="witness correlation as p/q")

    parser = argparse.ArgumentParser(prog="cilogic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("dsep", cmd_dsep, "d-separation query"),
        ("idsep", cmd_idsep, "ID-separation query"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("dag")
        p.add_argument("statement", nargs="?", help="e.g. 'I(2 ; 1 ; 3)'")
        p.add_argument("--batch", help="file with one statement per line")
        p.set_defaults(func=fn)

    p = sub.add_parser("build", parents=[common], help="causal input list -> DAG file")
    p.add_argument("causal_list")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("closure", parents=[common], help="semi-graphoid closure of a statement set")
    p.add_argument("statements")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("derives", parents=[common], help="is a goal derivable from a statement set")
    p.add_argument("statements")
    p.add_argument("goal")
    p.set_defaults(func=cmd_derives)

    p = sub.add_parser("counterexample", parents=[common], help="Gaussian witness for a dependency")
    p.add_argument("dag")
    p.add_argument("statement")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify", parents=[common], help="run a verification sweep")
    p.add_argument("sweep", choices=sorted(SWEEPS))
    p.add_argument("--count", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("requisite", parents=[common], help="requisite nodes for P(x | y)")
    p.add_argument("dag")
    p.add_argument("--x", required=True, help="comma-separated query nodes")
    p.add_argument("--y", default="", help="comma-separated evidence nodes")
    p.set_defaults(func=cmd_requisite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "counterexample" and args.rho is None:
        args.rho = DEFAULT_RHO
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
