"""d-separation and ID-separation queries, verified-statement tables, and
the minimal head-to-head active path search."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InputError, LogicError, ResourceLimitError
from .graph import (
    PATH_NODE_LIMIT,
    CiStatement,
    Dag,
    UndirectedPath,
    ancestors,
    node_set,
)

#: Largest graph for which all verified statements are materialised.
STATEMENT_TABLE_LIMIT = 7


@dataclass(frozen=True)
class SeparationVerdict:
    separated: bool
    witness: UndirectedPath | None = None

    def __bool__(self) -> bool:
        return self.separated


def _triple(dag: Dag, x, z, y):
    x, z, y = dag.check_nodes(x), dag.check_nodes(z), dag.check_nodes(y)
    if not x or not y:
        raise InputError("x and y must be nonempty")
    if x & y or x & z or y & z:
        raise InputError("x, z and y must be pairwise disjoint")
    return x, z, y


def path_is_active(dag: Dag, path: UndirectedPath, z, determined=None) -> bool:
    """True iff every interior non-collider of ``path`` lies outside ``z``
    and every interior collider is in ``z`` or has a descendant in ``z``.

    ``determined`` optionally adds nodes that also block as non-colliders
    (the ID-separation reading).
    """
    z = dag.check_nodes(z)
    if path.nodes[0] in z or path.nodes[-1] in z:
        raise InputError("path endpoints must lie outside z")
    blocked = z | node_set(determined)
    anc = ancestors(dag, z)
    for v, is_collider in zip(path.interior, path.collider_flags[1:-1]):
        if is_collider:
            if v not in anc:
                return False
        elif v in blocked:
            return False
    return True


def determined_closure(dag: Dag, z) -> frozenset[str]:
    """Nodes functionally determined by ``z``: ``z`` itself, then recursively
    every deterministic node whose parents are all determined."""
    det = set(dag.check_nodes(z))
    changed = True
    while changed:
        changed = False
        for v in sorted(dag.deterministic - det):
            if all(p in det for p in dag.parents[v]):
                det.add(v)
                changed = True
    return frozenset(det)


def _bool_mask(dag: Dag, nodes) -> np.ndarray:
    m = np.zeros(len(dag), dtype=np.bool_)
    for v in nodes:
        m[dag.index[v]] = True
    return m


def _shortcut(seq: list[str]) -> list[str]:
    # Splicing out the loop between two visits of a node keeps the trail
    # active: the splice point inherits a valid head-to-head status.
    i = 0
    while i < len(seq):
        j = len(seq) - 1 - seq[::-1].index(seq[i])
        if j != i:
            seq = seq[:i] + seq[j:]
        i += 1
    return seq


def _separation(dag: Dag, x, z, y, blocked) -> SeparationVerdict:
    anc = ancestors(dag, z)
    pp, pi, cp, ci = dag.csr
    hit, pred = _kernels.reach_states(
        pp, pi, cp, ci,
        _bool_mask(dag, x), _bool_mask(dag, blocked), _bool_mask(dag, anc), _bool_mask(dag, y),
    )
    if hit < 0:
        return SeparationVerdict(True)
    trail = []
    s = int(hit)
    while s != -1:
        trail.append(dag.nodes[s // 2])
        s = int(pred[s])
    path = UndirectedPath.from_nodes(dag, _shortcut(trail[::-1]))
    if not path_is_active(dag, path, z, blocked):
        raise LogicError(f"internal error: reconstructed witness {path} is blocked")
    return SeparationVerdict(False, path)


def d_separated(dag: Dag, x, z, y) -> SeparationVerdict:
    """Decide whether ``z`` d-separates ``x`` from ``y``.

    Runs in time linear in the number of edges.  When the sets are not
    separated the verdict carries an active simple path as witness.
    """
    x, z, y = _triple(dag, x, z, y)
    return _separation(dag, x, z, y, z)


def id_separated(dag: Dag, x, z, y) -> SeparationVerdict:
    """Like :func:`d_separated`, but non-collider nodes functionally determined
    by ``z`` also block.  Colliders are still opened only through ``z``."""
    x, z, y = _triple(dag, x, z, y)
    return _separation(dag, x, z, y, determined_closure(dag, z))


def _decode(dag: Dag, code: int) -> CiStatement:
    n = len(dag)
    full = (1 << n) - 1
    return CiStatement(dag.nodes_of(code & full), dag.nodes_of(code >> n & full), dag.nodes_of(code >> 2 * n & full))


def list_verified_statements(dag: Dag, mode: str = "d", max_nodes: int = STATEMENT_TABLE_LIMIT) -> set[CiStatement]:
    """Every canonical statement over the nodes of ``dag`` that is separated
    under ``mode`` (``"d"`` or ``"id"``)."""
    if mode not in ("d", "id"):
        raise InputError(f"unknown separation mode {mode!r}")
    if len(dag) > max_nodes:
        raise ResourceLimitError(f"statement table limited to {max_nodes} nodes, graph has {len(dag)}")
    if len(dag) < 2:
        return set()
    codes = _kernels.separation_table(
        np.int64(len(dag)), dag.parent_masks, np.int64(dag.mask_of(dag.deterministic)), mode == "id"
    )
    return {_decode(dag, int(c)) for c in codes}


def iter_active_paths(dag: Dag, a: str, b: str, z, blocked=None):
    """Yield simple active paths from ``a`` to ``b`` in lexicographic order.

    Partial paths are pruned as soon as an interior node is blocked, which
    keeps the search far below full path enumeration on sparse graphs.
    """
    z = node_set(z)
    blocked = z if blocked is None else node_set(blocked)
    anc = ancestors(dag, z)
    path = [a]
    on_path = {a}

    def ok(u, v, w):
        if dag.has_edge(u, v) and dag.has_edge(w, v):
            return v in anc
        return v not in blocked

    def extend():
        v = path[-1]
        for w in dag.neighbours[v]:
            if w in on_path:
                continue
            if len(path) > 1 and not ok(path[-2], v, w):
                continue
            if w == b:
                yield tuple(path) + (b,)
            else:
                path.append(w)
                on_path.add(w)
                yield from extend()
                path.pop()
                on_path.discard(w)

    yield from extend()


def minimal_collider_active_path(dag: Dag, a, b, z, max_nodes: int | None = None):
    """Active path from ``a`` to ``b`` given ``z`` with the fewest colliders.

    Ties go to the shorter path, then to the lexicographically smaller node
    sequence.  Returns ``(path, colliders)`` with colliders listed from
    ``a`` towards ``b``.
    """
    a, b = str(a), str(b)
    x, z, y = _triple(dag, {a}, z, {b})
    limit = PATH_NODE_LIMIT if max_nodes is None else max_nodes
    if len(dag) > limit:
        raise ResourceLimitError(f"active path search limited to {limit} nodes, graph has {len(dag)}")
    if d_separated(dag, x, z, y).separated:
        raise LogicError(f"no active path exists between {a} and {b} given {sorted(z)}")
    best = None
    best_key = None
    for seq in iter_active_paths(dag, a, b, z):
        path = UndirectedPath.from_nodes(dag, seq)
        key = (len(path.colliders), len(path))
        # lexicographic order of the search makes the first of equal keys win
        if best_key is None or key < best_key:
            best, best_key = path, key
    return best, best.colliders


def requisite_nodes(dag: Dag, x, y) -> frozenset[str]:
    """Nodes whose parameters can influence the query P(x | y).

    This is ``x | y`` plus every ancestor of ``x | y`` that is not
    ID-separated from ``x`` given ``y``.
    """
    x, y = dag.check_nodes(x), dag.check_nodes(y)
    if not x:
        raise InputError("x must be nonempty")
    if x & y:
        raise InputError("x and y must be disjoint")
    out = set(x | y)
    for a in sorted(ancestors(dag, x | y) - x - y):
        if not id_separated(dag, {a}, y, x).separated:
            out.add(a)
    return frozenset(out)
