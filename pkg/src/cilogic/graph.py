"""DAG representation, statements, undirected paths and basic graph primitives.

Node identifiers are opaque strings.  Every "deterministic order" in the
package is the lexicographic order of these strings.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .errors import InputError, ResourceLimitError, StructuralError

#: Default guard for the exponential path enumerators.
PATH_NODE_LIMIT = 12


def node_set(nodes) -> frozenset[str]:
    """Normalise a node or an iterable of nodes to a frozenset of identifiers."""
    if nodes is None:
        return frozenset()
    if isinstance(nodes, (str, int)):
        return frozenset([str(nodes)])
    return frozenset(str(v) for v in nodes)


def _sorted(nodes: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(nodes))


@dataclass(frozen=True)
class CiStatement:
    """The statement I(x, z, y): x and y are independent given z.

    The pair (x, y) is stored with the lexicographically smaller side first,
    so ``CiStatement(a, c, b) == CiStatement(b, c, a)``.
    """

    x: frozenset[str]
    z: frozenset[str]
    y: frozenset[str]

    def __post_init__(self):
        x, z, y = node_set(self.x), node_set(self.z), node_set(self.y)
        if not x or not y:
            raise InputError("both outer sets of a statement must be nonempty")
        if x & y or x & z or y & z:
            raise InputError(f"statement sets overlap: {_sorted(x)}, {_sorted(z)}, {_sorted(y)}")
        if _sorted(y) < _sorted(x):
            x, y = y, x
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "y", y)

    @property
    def nodes(self) -> frozenset[str]:
        return self.x | self.z | self.y

    def sort_key(self):
        return (_sorted(self.x), _sorted(self.z), _sorted(self.y))

    def __lt__(self, other: "CiStatement") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        x, z, y = (",".join(_sorted(s)) for s in (self.x, self.z, self.y))
        return f"I({x} ; {z} ; {y})" if z else f"I({x} ; ; {y})"

    def __repr__(self) -> str:
        return f"CiStatement<{self}>"


@dataclass(frozen=True)
class Dag:
    """Immutable directed acyclic graph with optional deterministic nodes."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]] = field(default_factory=frozenset)
    deterministic: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        raw_nodes = [str(v) for v in self.nodes]
        nodes = _sorted(set(raw_nodes))
        if len(nodes) != len(raw_nodes):
            raise InputError("duplicate node identifiers")
        raw_edges = [(str(p), str(c)) for p, c in self.edges]
        edges = frozenset(raw_edges)
        if len(edges) != len(raw_edges):
            raise InputError("duplicate edges")
        known = set(nodes)
        for p, c in edges:
            if p not in known or c not in known:
                raise InputError(f"edge {p}->{c} references an unknown node")
            if p == c:
                raise StructuralError(f"self-loop at {p}", cycle=[p, p])
        deterministic = node_set(self.deterministic)
        if not deterministic <= known:
            raise InputError(f"unknown deterministic nodes {_sorted(deterministic - known)}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "deterministic", deterministic)
        self.topological_order  # raises on cycles

    @classmethod
    def from_edges(cls, edges, nodes=(), deterministic=()) -> "Dag":
        """Build a DAG whose node set is ``nodes`` plus all edge endpoints."""
        edges = [(str(p), str(c)) for p, c in edges]
        all_nodes = {str(v) for v in nodes}
        for p, c in edges:
            all_nodes.update((p, c))
        return cls(tuple(all_nodes), frozenset(edges), node_set(deterministic))

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v) -> bool:
        return str(v) in self.index

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def parents(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.nodes}
        for p, c in self.edges:
            out[c].append(p)
        return {v: _sorted(ps) for v, ps in out.items()}

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.nodes}
        for p, c in self.edges:
            out[p].append(c)
        return {v: _sorted(cs) for v, cs in out.items()}

    @cached_property
    def neighbours(self) -> dict[str, tuple[str, ...]]:
        return {v: _sorted(set(self.parents[v]) | set(self.children[v])) for v in self.nodes}

    def has_edge(self, parent, child) -> bool:
        return (str(parent), str(child)) in self.edges

    def adjacent(self, u, v) -> bool:
        return self.has_edge(u, v) or self.has_edge(v, u)

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        indegree = {v: len(self.parents[v]) for v in self.nodes}
        heap = [v for v, d in indegree.items() if d == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for c in self.children[v]:
                indegree[c] -= 1
                if indegree[c] == 0:
                    heapq.heappush(heap, c)
        if len(order) != len(self.nodes):
            cycle = _find_cycle(self.children, {v for v, d in indegree.items() if d > 0})
            raise StructuralError("graph contains a directed cycle: " + " -> ".join(cycle), cycle=cycle)
        return tuple(order)

    # Array views consumed by the compiled kernels.

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(parent_ptr, parent_idx, child_ptr, child_idx) over node indices."""
        def build(rel):
            ptr = np.zeros(len(self.nodes) + 1, dtype=np.int64)
            idx = []
            for i, v in enumerate(self.nodes):
                idx.extend(self.index[u] for u in rel[v])
                ptr[i + 1] = len(idx)
            return ptr, np.asarray(idx, dtype=np.int64)

        pp, pi = build(self.parents)
        cp, ci = build(self.children)
        return pp, pi, cp, ci

    @cached_property
    def parent_masks(self) -> np.ndarray:
        """Per-node bitmask of parents; only for graphs with at most 62 nodes."""
        if len(self.nodes) > 62:
            raise ResourceLimitError("bitmask kernels support at most 62 nodes")
        masks = np.zeros(len(self.nodes), dtype=np.int64)
        for p, c in self.edges:
            masks[self.index[c]] |= np.int64(1) << np.int64(self.index[p])
        return masks

    def mask_of(self, nodes: Iterable[str]) -> int:
        m = 0
        for v in nodes:
            m |= 1 << self.index[v]
        return m

    def nodes_of(self, mask: int) -> frozenset[str]:
        return frozenset(v for i, v in enumerate(self.nodes) if mask >> i & 1)

    def check_nodes(self, nodes) -> frozenset[str]:
        s = node_set(nodes)
        unknown = [v for v in s if v not in self.index]
        if unknown:
            raise InputError(f"unknown nodes {sorted(unknown)}")
        return s

    def with_deterministic(self, deterministic) -> "Dag":
        return Dag(self.nodes, self.edges, node_set(deterministic))

    def edge_list(self) -> list[tuple[str, str]]:
        return sorted(self.edges)


def _find_cycle(children, candidates: set[str]) -> list[str]:
    # Every candidate node lies on or downstream of a cycle, so a walk that
    # stays inside the candidates must eventually repeat a node.
    start = min(candidates)
    seen: dict[str, int] = {}
    walk = []
    v = start
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = next(c for c in children[v] if c in candidates)
    return walk[seen[v]:] + [v]


def topological_order(dag: Dag) -> list[str]:
    """Parents before children; ties broken by identifier order."""
    return list(dag.topological_order)


def ancestors(dag: Dag, s) -> frozenset[str]:
    """``s`` together with every node that has a directed path into ``s``."""
    s = dag.check_nodes(s)
    seen = set(s)
    stack = list(s)
    while stack:
        v = stack.pop()
        for p in dag.parents[v]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def descendants(dag: Dag, s) -> frozenset[str]:
    """``s`` together with every node reachable from ``s`` by directed paths."""
    s = dag.check_nodes(s)
    seen = set(s)
    stack = list(s)
    while stack:
        v = stack.pop()
        for c in dag.children[v]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return frozenset(seen)


@dataclass(frozen=True)
class UndirectedPath:
    """A simple path in the skeleton of a DAG, with head-to-head flags.

    ``collider_flags[j]`` is true iff both path edges at ``nodes[j]`` point
    into it; endpoints are never colliders.
    """

    nodes: tuple[str, ...]
    collider_flags: tuple[bool, ...]

    @classmethod
    def from_nodes(cls, dag: Dag, nodes: Iterable) -> "UndirectedPath":
        nodes = tuple(str(v) for v in nodes)
        if len(nodes) < 2:
            raise InputError("a path needs at least two nodes")
        if len(set(nodes)) != len(nodes):
            raise InputError(f"path {nodes} repeats a node")
        for u, v in zip(nodes, nodes[1:]):
            if not dag.adjacent(u, v):
                raise InputError(f"{u} and {v} are not adjacent")
        flags = [False] * len(nodes)
        for j in range(1, len(nodes) - 1):
            flags[j] = dag.has_edge(nodes[j - 1], nodes[j]) and dag.has_edge(nodes[j + 1], nodes[j])
        return cls(nodes, tuple(flags))

    @property
    def colliders(self) -> list[str]:
        return [v for v, f in zip(self.nodes, self.collider_flags) if f]

    @property
    def interior(self) -> tuple[str, ...]:
        return self.nodes[1:-1]

    def __len__(self) -> int:
        """Number of edges."""
        return len(self.nodes) - 1

    def __str__(self) -> str:
        return " ".join(self.nodes)


def _guard(dag: Dag, max_nodes: int | None):
    limit = PATH_NODE_LIMIT if max_nodes is None else max_nodes
    if len(dag) > limit:
        raise ResourceLimitError(f"path enumeration limited to {limit} nodes, graph has {len(dag)}")


def iter_simple_paths(dag: Dag, a: str, b: str) -> Iterator[tuple[str, ...]]:
    """Yield simple skeleton paths from a to b in lexicographic order."""
    path = [a]
    on_path = {a}

    def extend(v):
        for w in dag.neighbours[v]:
            if w == b:
                yield tuple(path) + (b,)
            elif w not in on_path:
                path.append(w)
                on_path.add(w)
                yield from extend(w)
                path.pop()
                on_path.discard(w)

    yield from extend(a)


def enumerate_paths(dag: Dag, a, b, max_nodes: int | None = None) -> list[UndirectedPath]:
    """All simple undirected paths between ``a`` and ``b``.

    Exponential in general; refused for graphs above ``max_nodes``
    (default :data:`PATH_NODE_LIMIT`).
    """
    a, b = str(a), str(b)
    dag.check_nodes([a, b])
    if a == b:
        raise InputError("path endpoints must differ")
    _guard(dag, max_nodes)
    return [UndirectedPath.from_nodes(dag, p) for p in sorted(iter_simple_paths(dag, a, b))]


def all_statements(nodes) -> list[CiStatement]:
    """Every canonical statement over ``nodes``, in canonical sort order."""
    names = sorted(node_set(nodes))
    n = len(names)
    out = set()
    # each node goes to x, z, y or nowhere
    for code in range(4 ** n):
        parts = ([], [], [], [])
        c = code
        for v in names:
            parts[c % 4].append(v)
            c //= 4
        x, z, y, _ = parts
        if x and y:
            out.add(CiStatement(x, z, y))
    return sorted(out)
