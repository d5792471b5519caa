"""Closure of statement sets under symmetry, decomposition, weak union and
contraction, and the derivability test built on it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import InputError, ResourceLimitError
from .graph import CiStatement, node_set

#: Largest universe the closure will materialise (the space grows like 4^n).
CLOSURE_UNIVERSE_LIMIT = 6


@dataclass(frozen=True)
class StatementSet:
    universe: frozenset[str]
    statements: frozenset[CiStatement]

    def __post_init__(self):
        universe = node_set(self.universe)
        statements = frozenset(self.statements)
        for s in statements:
            if not s.nodes <= universe:
                raise InputError(f"{s} mentions nodes outside the universe")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "statements", statements)

    @classmethod
    def of(cls, statements: Iterable[CiStatement], universe=None) -> "StatementSet":
        statements = frozenset(statements)
        if universe is None:
            universe = frozenset().union(*(s.nodes for s in statements)) if statements else frozenset()
        return cls(node_set(universe), statements)

    def __contains__(self, s) -> bool:
        return s in self.statements

    def __len__(self) -> int:
        return len(self.statements)

    def __iter__(self):
        return iter(sorted(self.statements))


def _encoder(universe):
    names = sorted(universe)
    index = {v: i for i, v in enumerate(names)}
    n = len(names)

    def mask(nodes):
        m = 0
        for v in nodes:
            m |= 1 << index[v]
        return m

    def encode(s: CiStatement) -> int:
        return mask(s.x) | mask(s.z) << n | mask(s.y) << 2 * n

    def decode(code: int) -> CiStatement:
        full = (1 << n) - 1
        part = lambda m: frozenset(names[i] for i in range(n) if m >> i & 1)
        return CiStatement(part(code & full), part(code >> n & full), part(code >> 2 * n & full))

    return encode, decode


def closure(statement_set: StatementSet, max_universe: int = CLOSURE_UNIVERSE_LIMIT) -> StatementSet:
    """Least superset closed under the semi-graphoid axioms."""
    n = len(statement_set.universe)
    if n > max_universe:
        raise ResourceLimitError(f"closure limited to a universe of {max_universe} nodes, got {n}")
    if not statement_set.statements:
        return statement_set
    encode, decode = _encoder(statement_set.universe)
    seeds = np.array([encode(s) for s in sorted(statement_set.statements)], dtype=np.int64)
    codes = _kernels.semigraphoid_closure(np.int64(n), seeds)
    return StatementSet(statement_set.universe, frozenset(decode(int(c)) for c in codes))


def derives(statement_set: StatementSet, goal: CiStatement, max_universe: int = CLOSURE_UNIVERSE_LIMIT) -> bool:
    """True iff ``goal`` follows from the set by the semi-graphoid axioms."""
    if not goal.nodes <= statement_set.universe:
        raise InputError(f"{goal} mentions nodes outside the universe")
    if goal in statement_set.statements:
        return True
    return goal in closure(statement_set, max_universe).statements
