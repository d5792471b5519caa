"""Causal input lists, the DAGs they define, and minimal I-map construction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Protocol, Sequence

from .errors import InputError, LogicError
from .graph import CiStatement, Dag, node_set


class IndependenceOracle(Protocol):
    """Anything that answers "does I(x, z, y) hold?" for disjoint node sets."""

    def __call__(self, x: frozenset[str], z: frozenset[str], y: frozenset[str]) -> bool: ...


@dataclass(frozen=True)
class CausalInputList:
    """A total order together with a parent set drawn from each node's predecessors."""

    order: tuple[str, ...]
    parents: Mapping[str, frozenset[str]]

    def __post_init__(self):
        order = tuple(str(v) for v in self.order)
        if len(set(order)) != len(order):
            raise InputError("a node appears twice in the order")
        parents = {str(k): node_set(v) for k, v in dict(self.parents).items()}
        unknown = set(parents) - set(order)
        if unknown:
            raise InputError(f"parent sets given for nodes outside the order: {sorted(unknown)}")
        seen: set[str] = set()
        for v in order:
            ps = parents.setdefault(v, frozenset())
            if not ps <= seen:
                raise InputError(f"parents of {v} must precede it: {sorted(ps - seen)}")
            seen.add(v)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "parents", parents)

    def __eq__(self, other):
        if not isinstance(other, CausalInputList):
            return NotImplemented
        return self.order == other.order and self.parents == other.parents

    def __hash__(self):
        return hash((self.order, tuple(sorted((k, tuple(sorted(v))) for k, v in self.parents.items()))))

    def predecessors(self, v: str) -> frozenset[str]:
        return frozenset(self.order[: self.order.index(v)])


def statements_of(causal_list: CausalInputList) -> set[CiStatement]:
    """The nonvacuous statements I(i, S_i, U_i - S_i); U_i = predecessors of i."""
    out = set()
    for v in causal_list.order:
        rest = causal_list.predecessors(v) - causal_list.parents[v]
        if rest:
            out.add(CiStatement({v}, causal_list.parents[v], rest))
    return out


def build_dag(causal_list: CausalInputList) -> Dag:
    edges = [(p, v) for v in causal_list.order for p in causal_list.parents[v]]
    return Dag(causal_list.order, frozenset(edges))


def causal_list_of(dag: Dag, order: Sequence | None = None) -> CausalInputList:
    """Read a causal input list off ``dag`` along a topological ``order``.

    Defaults to the DAG's canonical topological order.
    """
    order = dag.topological_order if order is None else tuple(str(v) for v in order)
    if sorted(order) != list(dag.nodes):
        raise InputError("order must list every node exactly once")
    pos = {v: i for i, v in enumerate(order)}
    for p, c in dag.edges:
        if pos[p] > pos[c]:
            raise InputError(f"order is not topological: {p} -> {c}")
    return CausalInputList(order, {v: frozenset(dag.parents[v]) for v in order})


def dag_oracle(dag: Dag, mode: str = "d") -> IndependenceOracle:
    """Memoised separation oracle of ``dag`` (``mode`` is ``"d"`` or ``"id"``)."""
    from .separation import d_separated, id_separated

    test = d_separated if mode == "d" else id_separated

    @lru_cache(maxsize=None)
    def oracle(x, z, y):
        return test(dag, x, z, y).separated

    return lambda x, z, y: oracle(node_set(x), node_set(z), node_set(y))


def minimal_imap(oracle: IndependenceOracle, order: Sequence) -> Dag:
    """Minimal I-map of ``oracle`` along ``order``.

    For each node the parent set is the first predecessor subset, by
    cardinality and then lexicographically, that screens the node off from
    its remaining predecessors.
    """
    order = tuple(str(v) for v in order)
    parents = {}
    for i, v in enumerate(order):
        preds = sorted(order[:i])
        chosen = None
        for k in range(len(preds) + 1):
            for cand in combinations(preds, k):
                rest = frozenset(preds) - set(cand)
                if not rest or oracle(frozenset([v]), frozenset(cand), rest):
                    chosen = frozenset(cand)
                    break
            if chosen is not None:
                break
        for s in chosen:
            smaller = chosen - {s}
            if oracle(frozenset([v]), smaller, frozenset(preds) - smaller):
                raise LogicError(f"parent set of {v} is not inclusion-minimal: {s} is removable")
        parents[v] = chosen
    return build_dag(CausalInputList(order, parents))
