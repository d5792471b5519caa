"""Text formats: DAG files, causal input lists, statements and statement
sets, distributions, and witness reports.

All parsers ignore blank lines and ``#`` comments and raise
:class:`~cilogic.errors.ParseError` with 1-based line and column numbers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .causal import CausalInputList
from .discrete import DiscreteDistribution
from .errors import InputError, ParseError
from .gaussian import WitnessConstruction, WitnessReport
from .graph import CiStatement, Dag
from .semigraphoid import StatementSet

_TOKEN = re.compile(r"\S+")


def _lines(text: str):
    """Yield (line_no, [(column, token), ...]) for every nonblank line."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]
        if tokens:
            yield no, tokens, line


def read_text(path) -> str:
    return Path(path).read_text()


# DAG files


def parse_dag(text: str) -> Dag:
    nodes: list[str] = []
    edges: list[tuple[str, str]] = []
    deterministic: list[str] = []
    seen_nodes: set[str] = set()
    seen_edges: set[tuple[str, str]] = set()
    for no, toks, _ in _lines(text):
        (col, kw), args = toks[0], toks[1:]
        if kw == "node" and len(args) == 1:
            v = args[0][1]
            if v in seen_nodes:
                raise ParseError(f"duplicate node {v}", no, args[0][0])
            seen_nodes.add(v)
            nodes.append(v)
        elif kw == "edge" and len(args) == 2:
            for c, v in args:
                if v not in seen_nodes:
                    raise ParseError(f"edge uses undeclared node {v}", no, c)
            e = (args[0][1], args[1][1])
            if e in seen_edges:
                raise ParseError(f"duplicate edge {e[0]} {e[1]}", no, col)
            seen_edges.add(e)
            edges.append(e)
        elif kw == "deterministic" and len(args) == 1:
            if args[0][1] not in seen_nodes:
                raise ParseError(f"undeclared node {args[0][1]}", no, args[0][0])
            deterministic.append(args[0][1])
        elif kw in ("node", "edge", "deterministic"):
            raise ParseError(f"wrong number of arguments for {kw}", no, col)
        else:
            raise ParseError(f"unknown directive {kw!r}", no, col)
    try:
        return Dag(tuple(nodes), frozenset(edges), frozenset(deterministic))
    except InputError as exc:
        raise ParseError(str(exc)) from exc


def format_dag(dag: Dag) -> str:
    lines = [f"node {v}" for v in dag.nodes]
    lines += [f"edge {p} {c}" for p, c in dag.edge_list()]
    lines += [f"deterministic {v}" for v in sorted(dag.deterministic)]
    return "\n".join(lines) + "\n"


# Causal input lists


def parse_causal_list(text: str) -> CausalInputList:
    order = None
    parents: dict[str, list[str]] = {}
    for no, toks, line in _lines(text):
        col, kw = toks[0]
        if kw == "order":
            if order is not None:
                raise ParseError("duplicate order line", no, col)
            order = [t for _, t in toks[1:]]
        elif kw == "parents":
            if order is None:
                raise ParseError("parents line before the order line", no, col)
            colon = line.find(":")
            if colon < 0:
                raise ParseError("expected ':' after the node", no, len(line) + 1)
            head = line[len(line) - len(line.lstrip()) + len("parents"): colon].split()
            if len(head) != 1:
                raise ParseError("expected exactly one node before ':'", no, col)
            node = head[0]
            if node not in order:
                raise ParseError(f"node {node} is not in the order", no, line.find(node) + 1)
            if node in parents:
                raise ParseError(f"duplicate parents line for {node}", no, col)
            parents[node] = line[colon + 1:].split()
        else:
            raise ParseError(f"unknown directive {kw!r}", no, col)
    if order is None:
        raise ParseError("missing order line")
    try:
        return CausalInputList(tuple(order), {k: frozenset(v) for k, v in parents.items()})
    except InputError as exc:
        raise ParseError(str(exc)) from exc


def format_causal_list(causal_list: CausalInputList) -> str:
    lines = ["order " + " ".join(causal_list.order)]
    for v in causal_list.order:
        lines.append(f"parents {v} : " + " ".join(sorted(causal_list.parents[v])))
    return "\n".join(line.rstrip() for line in lines) + "\n"


# Statements

_STATEMENT = re.compile(r"^\s*I\s*\((?P<x>[^;()]*);(?P<z>[^;()]*);(?P<y>[^;()]*)\)\s*$")


def _node_list(part: str, line: int, column: int) -> list[str]:
    items = [s.strip() for s in part.split(",")]
    if items == [""]:
        return []
    for item in items:
        if not item or any(ch.isspace() for ch in item):
            raise ParseError(f"malformed node list {part.strip()!r}", line, column)
    if len(set(items)) != len(items):
        raise ParseError(f"repeated node in {part.strip()!r}", line, column)
    return items


def parse_statement_parts(text: str, line: int = 1, offset: int = 0):
    """Parse ``I(X ; Z ; Y)`` into three node lists (either outer list may be empty)."""
    m = _STATEMENT.match(text)
    if not m:
        raise ParseError(f"expected I(X ; Z ; Y), got {text.strip()!r}", line, offset + 1)
    return tuple(_node_list(m.group(k), line, offset + m.start(k) + 1) for k in ("x", "z", "y"))


def parse_statement(text: str, line: int = 1, offset: int = 0) -> CiStatement:
    x, z, y = parse_statement_parts(text, line, offset)
    if not x or not y:
        raise ParseError("statement needs nonempty X and Y", line, offset + 1)
    try:
        return CiStatement(x, z, y)
    except InputError as exc:
        raise ParseError(str(exc), line, offset + 1) from exc


def parse_statement_set(text: str) -> StatementSet:
    """Statement-set file: optional ``universe <ids>`` line, then one statement
    per line.  Statements with an empty outer set are vacuous and dropped."""
    universe = None
    statements = []
    mentioned: set[str] = set()
    for no, toks, line in _lines(text):
        col, kw = toks[0]
        if kw == "universe":
            if universe is not None:
                raise ParseError("duplicate universe line", no, col)
            universe = [t for _, t in toks[1:]]
            continue
        x, z, y = parse_statement_parts(line, no)
        mentioned.update(x, y, z)
        if x and y:
            try:
                statements.append(CiStatement(x, z, y))
            except InputError as exc:
                raise ParseError(str(exc), no, col) from exc
    if universe is None:
        universe = mentioned
    elif not mentioned <= set(universe):
        raise ParseError(f"statements mention nodes outside the universe: {sorted(mentioned - set(universe))}")
    return StatementSet(frozenset(universe), frozenset(statements))


def format_statement_set(statement_set: StatementSet) -> str:
    lines = ["universe " + " ".join(sorted(statement_set.universe))]
    lines += [str(s) for s in sorted(statement_set.statements)]
    return "\n".join(lines) + "\n"


# Distributions


def parse_distribution(text: str) -> DiscreteDistribution:
    variables = None
    domains = None
    mass: dict[tuple[str, ...], Fraction] = {}
    for no, toks, line in _lines(text):
        col, kw = toks[0]
        if variables is None:
            if kw != "vars":
                raise ParseError("expected a 'vars' header", no, col)
            variables, domains = [], []
            for c, tok in toks[1:]:
                name, sep, vals = tok.partition(":")
                if not sep or not name or not vals:
                    raise ParseError(f"expected <id>:<values>, got {tok!r}", no, c)
                variables.append(name)
                domains.append(vals.split(","))
            continue
        colon = line.find(":")
        if colon < 0:
            raise ParseError("expected ':' before the mass", no, len(line.rstrip()) + 1)
        values = line[:colon].split()
        if len(values) != len(variables):
            raise ParseError(f"expected {len(variables)} values, got {len(values)}", no, col)
        mass_text = line[colon + 1:].strip()
        try:
            f = Fraction(mass_text)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad mass {mass_text!r}", no, colon + 2) from None
        key = tuple(values)
        if key in mass:
            raise ParseError(f"duplicate instantiation {' '.join(values)}", no, col)
        mass[key] = f
    if variables is None:
        raise ParseError("missing 'vars' header")
    try:
        return DiscreteDistribution.from_mass(variables, domains, mass)
    except InputError as exc:
        raise ParseError(str(exc)) from exc


def format_distribution(p: DiscreteDistribution) -> str:
    header = "vars " + " ".join(f"{v}:{','.join(d)}" for v, d in zip(p.variables, p.domains))
    lines = [header]
    for inst, f in p.mass.items():
        lines.append(" ".join(inst) + f" : {f.numerator}/{f.denominator}")
    return "\n".join(lines) + "\n"


# Witness reports


def format_witness(w: WitnessConstruction, report: WitnessReport | None = None) -> str:
    """Structured text report; the reduced DAG is embedded in DAG file syntax."""
    lines = [
        f"sigma {w.sigma}",
        f"alpha {w.alpha}",
        f"beta {w.beta}",
        f"rho {w.rho}",
        f"path {w.q}",
        "colliders " + " ".join(w.colliders),
    ]
    lines += ["descendant " + " ".join(p) for p in w.descendant_paths]
    lines.append("begin reduced_dag")
    lines += format_dag(w.reduced_dag).splitlines()
    lines.append("end reduced_dag")
    lines.append("gamma_vars " + " ".join(w.gamma.variables))
    lines += ["gamma_row " + " ".join(str(v) for v in row) for row in w.gamma.entries]
    if report is not None:
        ok = lambda b: "pass" if b else "fail"
        lines.append(f"check positive_definite {ok(report.positive_definite)}")
        exp = "none" if report.exponent is None else str(report.exponent)
        lines.append(f"check violation {ok(report.violated)} determinant {report.determinant} exponent {exp}")
        lines.append(f"check causal_list {ok(report.causal_list_holds)}")
        lines.append(f"check paths_disjoint {ok(report.paths_disjoint)}")
        lines.append(f"check paths_meet_q_at_colliders {ok(report.paths_meet_q_only_at_colliders)}")
        lines.append(f"check singly_connected {ok(report.singly_connected)}")
        lines += [f"failure {f}" for f in report.failures]
        lines.append(f"result {ok(report.passed)}")
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> dict:
    """Read a report written by :func:`format_witness` back into plain values."""
    out: dict = {"descendant": [], "checks": {}, "failures": [], "gamma_rows": []}
    dag_lines: list[str] | None = None
    for no, raw in enumerate(text.splitlines(), start=1):
        if dag_lines is not None:
            if raw == "end reduced_dag":
                out["reduced_dag"] = parse_dag("\n".join(dag_lines))
                dag_lines = None
            else:
                dag_lines.append(raw)
            continue
        key, _, rest = raw.partition(" ")
        if key == "sigma":
            out["sigma"] = parse_statement(rest, no)
        elif key in ("alpha", "beta"):
            out[key] = rest
        elif key == "rho":
            out["rho"] = Fraction(rest)
        elif key in ("path", "colliders"):
            out[key] = rest.split()
        elif key == "descendant":
            out["descendant"].append(rest.split())
        elif raw == "begin reduced_dag":
            dag_lines = []
        elif key == "gamma_vars":
            out["gamma_vars"] = rest.split()
        elif key == "gamma_row":
            out["gamma_rows"].append([Fraction(v) for v in rest.split()])
        elif key == "check":
            name, verdict, *extra = rest.split()
            out["checks"][name] = verdict == "pass"
            if name == "violation":
                out["determinant"] = Fraction(extra[1])
                out["exponent"] = None if extra[3] == "none" else int(extra[3])
        elif key == "failure":
            out["failures"].append(rest)
        elif key == "result":
            out["passed"] = rest == "pass"
        elif raw.strip():
            raise ParseError(f"unknown report line {key!r}", no, 1)
    return out
