"""Hot combinatorial loops, compiled with numba when available.

Set ``CILOGIC_DISABLE_NUMBA=1`` to run the same functions as plain Python
over numpy arrays.  Both paths produce identical results; see
``benchmarks/bench_kernels.py`` for the timing comparison.

Statement codes pack three disjoint node bitmasks into one integer:
``x | z << n | y << 2n``.
"""

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

USE_NUMBA = njit is not None and os.environ.get("CILOGIC_DISABLE_NUMBA", "").lower() in ("", "0", "false", "no")


def _identity(fn):
    return fn


jit = njit(cache=True, nogil=True) if USE_NUMBA else _identity

UP = 0    # arrived at the node from one of its children
DOWN = 1  # arrived at the node from one of its parents


@jit
def reach_states(pp, pi, cp, ci, start, blocked, open_collider, target):
    """Breadth-first search over (node, arrival direction) states.

    ``blocked`` marks nodes that stop a trail when they are not head-to-head;
    ``open_collider`` marks nodes that let a head-to-head trail through.
    Start nodes expand in every direction.  Returns the first state that
    lands on a target node (or -1) and the predecessor array, where -1 marks
    a start state.
    """
    n = start.shape[0]
    visited = np.zeros(2 * n, dtype=np.bool_)
    pred = np.full(2 * n, -2, dtype=np.int64)
    queue = np.empty(2 * n, dtype=np.int64)
    head = 0
    tail = 0
    for a in range(n):
        if start[a]:
            s = 2 * a + UP
            visited[s] = True
            pred[s] = -1
            queue[tail] = s
            tail += 1
    while head < tail:
        s = queue[head]
        head += 1
        v = s // 2
        d = s % 2
        if pred[s] == -1 or (d == UP and not blocked[v]):
            go_up = True
            go_down = True
        elif d == DOWN:
            go_up = open_collider[v]
            go_down = not blocked[v]
        else:
            go_up = False
            go_down = False
        if go_up:
            for k in range(pp[v], pp[v + 1]):
                ns = 2 * pi[k] + UP
                if not visited[ns]:
                    visited[ns] = True
                    pred[ns] = s
                    if target[pi[k]]:
                        return ns, pred
                    queue[tail] = ns
                    tail += 1
        if go_down:
            for k in range(cp[v], cp[v + 1]):
                ns = 2 * ci[k] + DOWN
                if not visited[ns]:
                    visited[ns] = True
                    pred[ns] = s
                    if target[ci[k]]:
                        return ns, pred
                    queue[tail] = ns
                    tail += 1
    return -1, pred


@jit
def _ancestor_mask(n, parent_masks, s):
    anc = s
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if (anc >> v) & 1:
                new = anc | parent_masks[v]
                if new != anc:
                    anc = new
                    changed = True
    return anc


@jit
def determined_mask(n, parent_masks, deterministic, z):
    """Least fixpoint: z, plus deterministic nodes whose parents are all determined."""
    det = z
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if (deterministic >> v) & 1 and not (det >> v) & 1:
                if parent_masks[v] & ~det == 0:
                    det |= np.int64(1) << v
                    changed = True
    return det


@jit
def _reach_mask(n, a, parent_masks, child_masks, blocked, anc):
    up = parent_masks[a]
    down = child_masks[a]
    changed = True
    while changed:
        changed = False
        new_up = up
        new_down = down
        for v in range(n):
            if (up >> v) & 1 and not (blocked >> v) & 1:
                new_up |= parent_masks[v]
                new_down |= child_masks[v]
            if (down >> v) & 1:
                if not (blocked >> v) & 1:
                    new_down |= child_masks[v]
                if (anc >> v) & 1:
                    new_up |= parent_masks[v]
        if new_up != up or new_down != down:
            up = new_up
            down = new_down
            changed = True
    return up | down


@jit
def separation_table(n, parent_masks, deterministic, use_determined):
    """Codes of every separated statement (x, z, y) with x < y as integers."""
    full = (np.int64(1) << n) - 1
    child_masks = np.zeros(n, dtype=np.int64)
    for c in range(n):
        for p in range(n):
            if (parent_masks[c] >> p) & 1:
                child_masks[p] |= np.int64(1) << c
    out = np.empty(1 << (2 * n), dtype=np.int64)
    count = 0
    reach = np.zeros(n, dtype=np.int64)
    for z in range(full + 1):
        anc = _ancestor_mask(n, parent_masks, z)
        blocked = z
        if use_determined:
            blocked = determined_mask(n, parent_masks, deterministic, z)
        rest = full & ~z
        for a in range(n):
            if (rest >> a) & 1:
                reach[a] = _reach_mask(n, a, parent_masks, child_masks, blocked, anc)
        x = rest
        while x > 0:
            r = 0
            for a in range(n):
                if (x >> a) & 1:
                    r |= reach[a]
            avail = rest & ~x & ~r
            y = avail
            while y > 0:
                if x < y:
                    out[count] = x | (z << n) | (y << (2 * n))
                    count += 1
                y = (y - 1) & avail
            x = (x - 1) & rest
    return out[:count]


@jit
def _push(present, queue, tail, n, x, z, y):
    code = x | (z << n) | (y << (2 * n))
    if present[code]:
        return tail
    present[code] = True
    present[y | (z << n) | (x << (2 * n))] = True
    queue[tail] = code
    return tail + 1


@jit
def semigraphoid_closure(n, seeds):
    """Least set of codes containing ``seeds`` closed under the four axioms.

    Symmetry is kept implicit by marking both orientations of every code.
    Each newly derived statement is expanded once, as either premise of
    contraction, so the worklist reaches the fixpoint.
    """
    full = (np.int64(1) << n) - 1
    present = np.zeros(1 << (3 * n), dtype=np.bool_)
    queue = np.empty(1 << (3 * n), dtype=np.int64)
    tail = 0
    for code in seeds:
        tail = _push(present, queue, tail, n, code & full, (code >> n) & full, (code >> (2 * n)) & full)
    head = 0
    while head < tail:
        code = queue[head]
        head += 1
        x = code & full
        z = (code >> n) & full
        y = (code >> (2 * n)) & full
        for t in range(2):
            a = x if t == 0 else y
            b = y if t == 0 else x
            # decomposition and weak union over nonempty proper subsets w of b
            w = (b - 1) & b
            while w > 0:
                rem = b & ~w
                tail = _push(present, queue, tail, n, a, z, rem)
                tail = _push(present, queue, tail, n, a, z | w, rem)
                w = (w - 1) & b
            # contraction with this statement as I(a, z' u y', b)
            yp = z
            while yp > 0:
                zz = z & ~yp
                if present[a | (zz << n) | (yp << (2 * n))]:
                    tail = _push(present, queue, tail, n, a, zz, yp | b)
                yp = (yp - 1) & z
            # contraction with this statement as I(a, z, b) and partner I(a, z u b, w)
            rest = full & ~(a | z | b)
            w = rest
            while w > 0:
                if present[a | ((z | b) << n) | (w << (2 * n))]:
                    tail = _push(present, queue, tail, n, a, z, b | w)
                w = (w - 1) & rest
    return queue[:tail]
