"""Exhaustive and randomised verification sweeps.

Each sweep checks one of the package's correctness properties against an
independent route (path enumeration, exact probability tables, semi-graphoid
closure) and returns a :class:`SweepResult`.  The ``verify`` CLI subcommand
and the acceptance tests both run these.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator

import numpy as np

from .causal import causal_list_of, dag_oracle, minimal_imap, statements_of
from .discrete import (
    CPT_DENOMINATOR,
    PERFECT_MAP_LIMIT,
    _factorised,
    _random_cpt_row,
    armstrong_product,
    ci_holds,
    ci_set,
    perfect_map_distribution,
    random_dag_distribution,
)
from .errors import ResourceLimitError
from .gaussian import DEFAULT_RHO, construct_witness, verify_witness
from .graph import Dag, all_statements, enumerate_paths
from .semigraphoid import StatementSet, closure
from .separation import d_separated, id_separated, list_verified_statements, path_is_active

MAX_REPORTED_FAILURES = 20


@dataclass
class SweepResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str):
        self.failures.append(message)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in sorted(self.details.items()))
        return f"{status} {self.name}: {self.checked} checks, {len(self.failures)} failures, {self.seconds:.1f}s{extra}"


class _timed:
    def __init__(self, result: SweepResult):
        self.result = result

    def __enter__(self):
        self.start = time.perf_counter()
        return self.result

    def __exit__(self, *exc):
        self.result.seconds = time.perf_counter() - self.start
        del self.result.failures[MAX_REPORTED_FAILURES:]
        return False


# Graph families


def wet_pavement_dag() -> Dag:
    """Rain and a broken pipe both wet the pavement, which makes someone slip."""
    return Dag.from_edges([("alpha", "beta"), ("delta", "beta"), ("beta", "gamma")])


def diamond_dag() -> Dag:
    """1 -> 2, 1 -> 3, 2 -> 4, 3 -> 4, 4 -> 5."""
    return Dag.from_edges([("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("4", "5")])


def edge_subset_dags(n: int) -> Iterator[Dag]:
    """Every DAG on nodes 1..n whose edges all point from lower to higher labels."""
    names = [str(i) for i in range(1, n + 1)]
    pairs = list(combinations(names, 2))
    for mask in range(1 << len(pairs)):
        edges = [e for k, e in enumerate(pairs) if mask >> k & 1]
        yield Dag(tuple(names), frozenset(edges))


def small_dags(max_nodes: int, min_nodes: int = 1) -> Iterator[Dag]:
    for n in range(min_nodes, max_nodes + 1):
        yield from edge_subset_dags(n)


def random_dag(rng: np.random.Generator, max_nodes: int, min_nodes: int = 2, density: float = 0.5) -> Dag:
    """Random DAG whose topological order is a random permutation of its labels."""
    n = int(rng.integers(min_nodes, max_nodes + 1))
    names = [str(i) for i in range(1, n + 1)]
    order = [names[i] for i in rng.permutation(n)]
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Dag(tuple(names), frozenset(edges))


def topological_orders(dag: Dag) -> Iterator[tuple[str, ...]]:
    """All linear extensions of ``dag``, in lexicographic order."""
    indegree = {v: len(dag.parents[v]) for v in dag.nodes}
    order: list[str] = []

    def extend():
        if len(order) == len(dag):
            yield tuple(order)
            return
        for v in dag.nodes:
            if indegree[v] == 0 and v not in placed:
                placed.add(v)
                order.append(v)
                for c in dag.children[v]:
                    indegree[c] -= 1
                yield from extend()
                for c in dag.children[v]:
                    indegree[c] += 1
                order.pop()
                placed.discard(v)

    placed: set[str] = set()
    yield from extend()


def warm_kernels() -> float:
    """Compile (or load from cache) every numba kernel; returns the seconds spent."""
    start = time.perf_counter()
    tiny = Dag(("a", "b", "c"), frozenset({("a", "b"), ("c", "b")}), frozenset({"c"}))
    d_separated(tiny, "a", "b", "c")
    id_separated(tiny, "a", "b", "c")
    list_verified_statements(tiny, "d")
    list_verified_statements(tiny, "id")
    closure(StatementSet.of(statements_of(causal_list_of(tiny)), tiny.nodes))
    return time.perf_counter() - start


# Sweeps


def _path_oracle(dag: Dag):
    """Definitional separation: no enumerated path between x and y is active."""
    paths = {}
    for a, b in combinations(dag.nodes, 2):
        paths[a, b] = paths[b, a] = enumerate_paths(dag, a, b)
    cache = {}

    def active(a, b, z, determined):
        key = (a, b, z, determined)
        if key not in cache:
            cache[key] = any(path_is_active(dag, p, z, determined) for p in paths[a, b])
        return cache[key]

    def separated(x, z, y, determined=frozenset()):
        return not any(active(a, b, z, determined) for a in x for b in y)

    return separated


def sweep_separation_oracle(max_nodes: int = 5) -> SweepResult:
    """Fast d-separation against path enumeration on every small DAG."""
    result = SweepResult("separation-oracle")
    with _timed(result):
        graphs = 0
        for dag in small_dags(max_nodes, min_nodes=2):
            graphs += 1
            oracle = _path_oracle(dag)
            for s in all_statements(dag.nodes):
                result.checked += 1
                fast = d_separated(dag, s.x, s.z, s.y)
                back = d_separated(dag, s.y, s.z, s.x)
                slow = oracle(s.x, s.z, s.y)
                if fast.separated != slow or back.separated != slow:
                    result.fail(f"{sorted(dag.edges)} {s}: fast={fast.separated} reverse={back.separated} paths={slow}")
                elif not fast.separated and not path_is_active(dag, fast.witness, s.z):
                    result.fail(f"{sorted(dag.edges)} {s}: witness {fast.witness} is blocked")
        result.details["graphs"] = graphs
    return result


def sweep_id_separation(max_nodes: int = 5) -> SweepResult:
    """ID-separation equals d-separation without deterministic nodes and only
    adds independencies when some nodes are deterministic."""
    result = SweepResult("id-separation")
    with _timed(result):
        graphs = 0
        for dag in small_dags(max_nodes, min_nodes=2):
            graphs += 1
            for s in all_statements(dag.nodes):
                result.checked += 1
                d = d_separated(dag, s.x, s.z, s.y).separated
                i = id_separated(dag, s.x, s.z, s.y).separated
                if d != i:
                    result.fail(f"{sorted(dag.edges)} {s}: d={d} id={i} with no deterministic nodes")
            base = list_verified_statements(dag, "d")
            for k in range(1, len(dag) + 1):
                for det in combinations(dag.nodes, k):
                    result.checked += 1
                    extended = list_verified_statements(dag.with_deterministic(det), "id")
                    if not base <= extended:
                        missing = sorted(base - extended)[0]
                        result.fail(f"{sorted(dag.edges)} deterministic={det}: lost {missing}")
        result.details["graphs"] = graphs
    return result


def sweep_closure_equivalence(count: int = 200, max_nodes: int = 5, seed: int = 0) -> SweepResult:
    """Closure of a causal list equals the d-separation statements of its DAG."""
    result = SweepResult("theorem2")
    rng = np.random.default_rng(seed)
    with _timed(result):
        for _ in range(count):
            dag = random_dag(rng, max_nodes)
            causal = causal_list_of(dag)
            closed = closure(StatementSet.of(statements_of(causal), dag.nodes)).statements
            verified = list_verified_statements(dag)
            result.checked += 1
            if closed != verified:
                extra = sorted(closed - verified)[:3]
                missing = sorted(verified - closed)[:3]
                result.fail(f"{sorted(dag.edges)}: closure extra {extra} missing {missing}")
    return result


def sweep_soundness(count: int = 100, max_nodes: int = 5, seed: int = 0, domain_size: int = 2) -> SweepResult:
    """Every d-separated statement holds in a random distribution factorising along the DAG."""
    result = SweepResult("soundness")
    rng = np.random.default_rng(seed)
    with _timed(result):
        for k in range(count):
            dag = random_dag(rng, max_nodes)
            p = random_dag_distribution(dag, seed * 100_003 + k, domain_size)
            for s in sorted(list_verified_statements(dag)):
                result.checked += 1
                if not ci_holds(p, s.x, s.z, s.y):
                    result.fail(f"{sorted(dag.edges)} seed {k}: {s} fails")
    return result


def _sparse_cpt_row(rng: np.random.Generator, k: int) -> list[int]:
    # like _random_cpt_row, but entries may be zero
    cuts = np.sort(rng.integers(0, CPT_DENOMINATOR + 1, size=k - 1))
    bounds = [0, *(int(c) for c in cuts), CPT_DENOMINATOR]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def random_distribution(rng: np.random.Generator, n_vars: int = 4):
    """Random binary distribution with a random DAG structure; a third of them
    use conditional tables with zero entries, so not every draw is positive."""
    dag = random_dag(rng, n_vars, min_nodes=n_vars, density=float(rng.uniform(0.2, 0.8)))
    row = _sparse_cpt_row if rng.random() < 1 / 3 else _random_cpt_row
    return _factorised(dag, rng, 2, row)


def sweep_armstrong(count: int = 100, n_vars: int = 4, seed: int = 0) -> SweepResult:
    """A statement holds in the Armstrong product iff it holds in both factors."""
    result = SweepResult("armstrong")
    rng = np.random.default_rng(seed)
    nontrivial = 0
    with _timed(result):
        for k in range(count):
            p1 = random_distribution(rng, n_vars)
            p2 = random_distribution(rng, n_vars)
            prod = armstrong_product(p1, p2)
            if prod.strictly_positive != (p1.strictly_positive and p2.strictly_positive):
                result.fail(f"pair {k}: positivity not preserved")
            held = 0
            for s in all_statements(p1.variables):
                result.checked += 1
                a, b = ci_holds(p1, s.x, s.z, s.y), ci_holds(p2, s.x, s.z, s.y)
                c = ci_holds(prod, s.x, s.z, s.y)
                held += c
                if c != (a and b):
                    result.fail(f"pair {k}: {s} product={c} factors={a},{b}")
            nontrivial += held > 0
        result.details["pairs_with_independencies"] = nontrivial
    return result


def _witness_dags(max_nodes: int, include_diamond: bool):
    if include_diamond:
        yield diamond_dag()
    yield from small_dags(max_nodes, min_nodes=2)


def sweep_completeness(max_nodes: int = 4, rho=DEFAULT_RHO, include_diamond: bool = True) -> SweepResult:
    """Every dependency gets a Gaussian witness that is positive definite,
    satisfies the causal list and violates the dependency by a power of rho."""
    result = SweepResult("completeness")
    rho = Fraction(rho)
    with _timed(result):
        for dag in _witness_dags(max_nodes, include_diamond):
            verified = list_verified_statements(dag)
            for s in all_statements(dag.nodes):
                if s in verified:
                    continue
                result.checked += 1
                w = construct_witness(dag, s, rho)
                report = verify_witness(dag, w)
                ok = (
                    report.positive_definite
                    and report.violated
                    and report.exponent is not None
                    and report.exponent >= 1
                    and report.causal_list_holds
                )
                if not ok:
                    result.fail(f"{sorted(dag.edges)} {s}: {'; '.join(report.failures)}")
    return result


def sweep_witness_structure(max_nodes: int = 4, rho=DEFAULT_RHO, include_diamond: bool = True) -> SweepResult:
    """Descendant paths are pairwise disjoint, meet q only at their collider,
    and the reduced DAG is singly connected."""
    result = SweepResult("witness-structure")
    with _timed(result):
        for dag in _witness_dags(max_nodes, include_diamond):
            verified = list_verified_statements(dag)
            for s in all_statements(dag.nodes):
                if s in verified:
                    continue
                result.checked += 1
                report = verify_witness(dag, construct_witness(dag, s, Fraction(rho)))
                if not (report.paths_disjoint and report.paths_meet_q_only_at_colliders and report.singly_connected):
                    result.fail(f"{sorted(dag.edges)} {s}: {'; '.join(report.failures)}")
    return result


def sweep_perfect_map(max_nodes: int = 4, seed: int = 0, include_diamond: bool = True) -> SweepResult:
    """The repaired distribution's independencies equal the DAG's d-separations."""
    if max_nodes > PERFECT_MAP_LIMIT:
        raise ResourceLimitError(f"perfect map construction limited to {PERFECT_MAP_LIMIT} nodes, asked for {max_nodes}")
    result = SweepResult("perfect-map")
    with _timed(result):
        for dag in _witness_dags(max_nodes, include_diamond):
            result.checked += 1
            p = perfect_map_distribution(dag, seed)
            if ci_set(p) != list_verified_statements(dag):
                result.fail(f"{sorted(dag.edges)}: independence sets differ")
            if max(len(d) for d in p.domains) > 2:
                result.details["repaired"] = result.details.get("repaired", 0) + 1
    return result


def sweep_minimal_imap(max_nodes: int = 5) -> SweepResult:
    """A DAG's own d-separation oracle rebuilds it along every topological order."""
    result = SweepResult("minimal-imap")
    with _timed(result):
        for dag in small_dags(max_nodes):
            oracle = dag_oracle(dag)
            for order in topological_orders(dag):
                result.checked += 1
                rebuilt = minimal_imap(oracle, order)
                if rebuilt != dag:
                    result.fail(f"{sorted(dag.edges)} order {order}: got {sorted(rebuilt.edges)}")
    return result


SWEEPS = {
    "separation": sweep_separation_oracle,
    "idsep": sweep_id_separation,
    "theorem2": sweep_closure_equivalence,
    "soundness": sweep_soundness,
    "completeness": sweep_completeness,
    "witness-structure": sweep_witness_structure,
    "armstrong": sweep_armstrong,
    "perfectmap": sweep_perfect_map,
    "imap": sweep_minimal_imap,
}
