"""Gaussian counterexamples for graphically-unverified statements.

Given a dependency I(x, z, y) of a DAG, :func:`construct_witness` reduces the
DAG to the links of one minimal-collider active path plus the shortest
directed paths from its colliders into ``z``, and assigns the correlation
``rho ** l`` to node pairs joined by a collider-free path of length ``l``.
The resulting normal distribution satisfies the DAG's causal input list but
violates the chosen dependency.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .causal import causal_list_of, statements_of
from .errors import InputError, LogicError, NumericError
from .exact import det, is_positive_definite, leading_minors, solve, submatrix
from .graph import CiStatement, Dag, UndirectedPath, node_set
from .separation import d_separated, list_verified_statements, minimal_collider_active_path

DEFAULT_RHO = Fraction(1, 2)


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric matrix of exact rationals with unit diagonal."""

    variables: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        variables = tuple(str(v) for v in self.variables)
        entries = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        n = len(variables)
        if len(set(variables)) != n:
            raise InputError("duplicate covariance variables")
        if len(entries) != n or any(len(row) != n for row in entries):
            raise InputError("covariance matrix must be square and match its variables")
        for i in range(n):
            if entries[i][i] != 1:
                raise InputError(f"diagonal entry of {variables[i]} is {entries[i][i]}, expected 1")
            for j in range(i):
                if entries[i][j] != entries[j][i]:
                    raise InputError(f"matrix is not symmetric at ({variables[i]}, {variables[j]})")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "entries", entries)

    @property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    def __getitem__(self, pair) -> Fraction:
        a, b = pair
        idx = self.index
        return self.entries[idx[str(a)]][idx[str(b)]]

    def leading_minors(self) -> list[Fraction]:
        return leading_minors(self.entries)

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self.entries)

    def restricted(self, variables) -> list[list[Fraction]]:
        idx = self.index
        rows = [idx[str(v)] for v in variables]
        return submatrix(self.entries, rows, rows)


def partial_covariance(gamma: CovarianceMatrix, a, b, z) -> Fraction:
    """sigma_ab - Sigma_aZ Sigma_ZZ^-1 Sigma_Zb, exactly."""
    z = sorted(node_set(z))
    if not z:
        return gamma[a, b]
    try:
        w = solve(gamma.restricted(z), [gamma[v, b] for v in z])
    except NumericError as exc:
        raise NumericError(f"covariance of {z} is singular") from exc
    return gamma[a, b] - sum(gamma[a, v] * wv for v, wv in zip(z, w))


def gaussian_ci(gamma: CovarianceMatrix, x, z, y) -> bool:
    """Exact Gaussian test of I(x, z, y).

    For normal distributions the set statement holds iff every pairwise
    statement does, so the test runs pairwise on partial covariances.
    """
    x, z, y = node_set(x), node_set(z), node_set(y)
    known = set(gamma.variables)
    if not (x | y | z) <= known:
        raise InputError(f"unknown variables {sorted((x | y | z) - known)}")
    if not x or not y or x & y or x & z or y & z:
        raise InputError("x, z, y must be disjoint with x and y nonempty")
    return all(partial_covariance(gamma, a, b, z) == 0 for a in sorted(x) for b in sorted(y))


@dataclass(frozen=True)
class WitnessConstruction:
    sigma: CiStatement
    alpha: str
    beta: str
    rho: Fraction
    q: UndirectedPath
    colliders: tuple[str, ...]
    # descendant_paths[i] runs from colliders[i] to targets[i]; a single node when the collider is in z
    descendant_paths: tuple[tuple[str, ...], ...]
    targets: tuple[str, ...]
    reduced_dag: Dag
    gamma: CovarianceMatrix

    @property
    def block_order(self) -> list[str]:
        """alpha, the collider targets left to right, beta, then the rest of z."""
        head = [self.alpha, *self.targets, self.beta]
        return head + sorted(self.sigma.z - set(head))


def closest_descendant_path(dag: Dag, h: str, z) -> tuple[str, ...]:
    """Shortest directed path from ``h`` into ``z``; ties resolve to the
    lexicographically smallest node sequence."""
    z = node_set(z)
    if h in z:
        return (h,)
    parent = {h: None}
    queue = deque([h])
    while queue:
        v = queue.popleft()
        if v in z:
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return tuple(reversed(path))
        for c in dag.children[v]:
            if c not in parent:
                parent[c] = v
                queue.append(c)
    raise LogicError(f"collider {h} has no descendant in {sorted(z)}")


def _skeleton_is_forest(dag: Dag) -> bool:
    seen: set[str] = set()
    for root in dag.nodes:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, None)]
        while stack:
            v, came_from = stack.pop()
            for w in dag.neighbours[v]:
                if w == came_from:
                    continue
                if w in seen:
                    return False
                seen.add(w)
                stack.append((w, v))
    return True


def regular_path_covariance(dag: Dag, order, rho: Fraction) -> CovarianceMatrix:
    """Covariance with entry rho**l for nodes joined by a collider-free path of
    length l, zero otherwise.  Requires a singly connected DAG."""
    if not _skeleton_is_forest(dag):
        raise LogicError("covariance construction needs a singly connected DAG")
    order = [str(v) for v in order]
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    m = [[Fraction(0)] * n for _ in range(n)]
    for src in order:
        m[pos[src]][pos[src]] = Fraction(1)
        # walk the tree from src, stopping at the first head-to-head node
        stack = [(w, src, 1) for w in dag.neighbours[src]]
        while stack:
            v, prev, length = stack.pop()
            if v in pos:
                m[pos[src]][pos[v]] = rho ** length
            for w in dag.neighbours[v]:
                if w == prev:
                    continue
                if dag.has_edge(prev, v) and dag.has_edge(w, v):
                    continue
                stack.append((w, v, length + 1))
    return CovarianceMatrix(tuple(order), tuple(tuple(r) for r in m))


def construct_witness(dag: Dag, sigma: CiStatement, rho=DEFAULT_RHO) -> WitnessConstruction:
    """Build the reduced DAG and regular-path covariance violating ``sigma``."""
    rho = Fraction(rho)
    if not 0 < rho < 1:
        raise InputError("rho must lie strictly between 0 and 1")
    dag.check_nodes(sigma.nodes)
    if d_separated(dag, sigma.x, sigma.z, sigma.y).separated:
        raise LogicError(f"{sigma} is graphically verified; a witness exists only for dependencies")
    alpha, beta = next(
        (a, b)
        for a in sorted(sigma.x)
        for b in sorted(sigma.y)
        if not d_separated(dag, {a}, sigma.z, {b}).separated
    )
    q, colliders = minimal_collider_active_path(dag, alpha, beta, sigma.z)
    paths = tuple(closest_descendant_path(dag, h, sigma.z) for h in colliders)

    edges = set()
    for u, v in zip(q.nodes, q.nodes[1:]):
        edges.add((u, v) if dag.has_edge(u, v) else (v, u))
    for p in paths:
        edges.update(zip(p, p[1:]))
    reduced = Dag(dag.nodes, frozenset(edges))

    targets = tuple(p[-1] for p in paths)
    head = [alpha, *targets, beta]
    order = head + sorted(sigma.z - set(head)) + sorted(set(dag.nodes) - sigma.z - set(head))
    gamma = regular_path_covariance(reduced, order, rho)
    return WitnessConstruction(sigma, alpha, beta, rho, q, tuple(colliders), paths, targets, reduced, gamma)


@dataclass
class WitnessReport:
    positive_definite: bool
    minors: list[Fraction]
    violated: bool
    determinant: Fraction
    exponent: int | None
    causal_list_holds: bool
    paths_disjoint: bool
    paths_meet_q_only_at_colliders: bool
    singly_connected: bool
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _power_of(value: Fraction, rho: Fraction) -> int | None:
    e, p = 0, Fraction(1)
    while p > value:
        p *= rho
        e += 1
    return e if p == value else None


def witness_determinant(w: WitnessConstruction) -> Fraction:
    """Determinant of the alpha/beta minor of the covariance restricted to
    alpha, z and beta in block order (row alpha and column beta removed)."""
    order = w.block_order
    sub = w.gamma.restricted(order)
    k = len(w.targets)
    rows = [i for i in range(len(order)) if i != 0]
    cols = [i for i in range(len(order)) if i != k + 1]
    return det(submatrix(sub, rows, cols))


def verify_witness(dag: Dag, w: WitnessConstruction, exhaustive: bool = False) -> WitnessReport:
    """Check positivity, the violated dependency and the causal input list.

    With ``exhaustive`` every graphically-verified statement of ``dag`` is
    tested as well (small graphs only).  Failures are reported, not raised.
    """
    failures = []
    minors = w.gamma.leading_minors()
    pd = all(m > 0 for m in minors)
    if not pd:
        failures.append("covariance is not positive definite")

    if pd:
        violated = not gaussian_ci(w.gamma, {w.alpha}, w.sigma.z, {w.beta})
    else:
        violated = _partial_or_none(w) != 0
    if not violated:
        failures.append(f"I({w.alpha} ; {','.join(sorted(w.sigma.z))} ; {w.beta}) holds in the witness")
    determinant = witness_determinant(w)
    exponent = _power_of(determinant, w.rho) if determinant > 0 else None
    if exponent is None or exponent < 1:
        failures.append(f"tested determinant {determinant} is not a positive power of rho")

    statements = statements_of(causal_list_of(dag))
    if exhaustive:
        statements |= list_verified_statements(dag)
    causal_ok = True
    if pd:
        for s in sorted(statements):
            if not gaussian_ci(w.gamma, s.x, s.z, s.y):
                causal_ok = False
                failures.append(f"{s} fails in the witness")
    else:
        causal_ok = False

    disjoint = all(
        not set(p) & set(r) for i, p in enumerate(w.descendant_paths) for r in w.descendant_paths[i + 1:]
    )
    if not disjoint:
        failures.append("descendant paths intersect")
    only_at = all(set(p) & set(w.q.nodes) == {h} for p, h in zip(w.descendant_paths, w.colliders))
    if not only_at:
        failures.append("a descendant path meets q outside its collider")
    forest = _skeleton_is_forest(w.reduced_dag)
    if not forest:
        failures.append("reduced DAG is not singly connected")

    return WitnessReport(pd, minors, violated, determinant, exponent, causal_ok, disjoint, only_at, forest, failures)


def _partial_or_none(w: WitnessConstruction):
    try:
        return partial_covariance(w.gamma, w.alpha, w.beta, w.sigma.z)
    except NumericError:
        return None
