"""Exact finite distributions: conditional independence tests, the Armstrong
product, DAG-factorised random distributions and perfect-map construction.

Masses are stored as integer numerators over one common denominator, so
every comparison is exact and needs no division.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError, ResourceLimitError
from .graph import CiStatement, Dag, all_statements, node_set
from .separation import list_verified_statements

#: Default node limit for :func:`perfect_map_distribution`.
PERFECT_MAP_LIMIT = 5
#: Seeds tried per dependency before the repair loop gives up.
REPAIR_BUDGET = 64
#: Probability-table entries are multiples of 1 / CPT_DENOMINATOR.
CPT_DENOMINATOR = 1000


class DiscreteDistribution:
    """Joint probability table over named finite variables.

    Parameters
    ----------
    variables : sequence of str
    domains : sequence of sequences of str
        Value labels per variable, in table axis order.
    numerators : array_like of int
        Table of shape ``[len(d) for d in domains]``.
    denominator : int
        Common denominator; numerators must sum to it.
    """

    def __init__(self, variables, domains, numerators, denominator=1):
        self.variables = tuple(str(v) for v in variables)
        self.domains = tuple(tuple(str(a) for a in d) for d in domains)
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable names")
        if len(self.domains) != len(self.variables):
            raise InputError("one domain per variable is required")
        for v, d in zip(self.variables, self.domains):
            if not d or len(set(d)) != len(d):
                raise InputError(f"domain of {v} must be nonempty and duplicate free")
        table = np.empty([len(d) for d in self.domains], dtype=object)
        table[...] = np.asarray(numerators, dtype=object).reshape(table.shape)
        flat = [int(v) for v in table.flat]
        if any(v < 0 for v in flat):
            raise InputError("probability masses must be nonnegative")
        denominator = int(denominator)
        if denominator <= 0 or sum(flat) != denominator:
            raise InputError(f"masses sum to {Fraction(sum(flat), max(denominator, 1))}, not 1")
        g = math.gcd(denominator, *flat)
        table[...] = np.array([v // g for v in flat], dtype=object).reshape(table.shape)
        self.table = table
        self.denominator = denominator // g

    @classmethod
    def from_mass(cls, variables, domains, mass: Mapping[Sequence, Fraction]) -> "DiscreteDistribution":
        """Build from ``{instantiation: probability}``; missing instantiations get zero."""
        domains = [tuple(str(a) for a in d) for d in domains]
        fracs = {tuple(str(a) for a in k): Fraction(v) for k, v in mass.items()}
        denom = math.lcm(1, *(f.denominator for f in fracs.values()))
        pos = [{a: i for i, a in enumerate(d)} for d in domains]
        table = np.zeros([len(d) for d in domains], dtype=object)
        table[...] = 0
        for inst, f in fracs.items():
            if len(inst) != len(domains):
                raise InputError(f"instantiation {inst} has the wrong arity")
            try:
                idx = tuple(p[a] for p, a in zip(pos, inst))
            except KeyError as exc:
                raise InputError(f"value {exc.args[0]!r} outside its domain") from None
            table[idx] += f.numerator * (denom // f.denominator)
        return cls(variables, domains, table, denom)

    @property
    def mass(self) -> dict[tuple[str, ...], Fraction]:
        """Nonzero masses keyed by instantiation."""
        out = {}
        for idx in product(*(range(len(d)) for d in self.domains)):
            v = self.table[idx]
            if v:
                out[tuple(d[i] for d, i in zip(self.domains, idx))] = Fraction(v, self.denominator)
        return out

    def probability(self, instantiation) -> Fraction:
        idx = tuple(d.index(str(a)) for d, a in zip(self.domains, instantiation))
        return Fraction(self.table[idx], self.denominator)

    @property
    def strictly_positive(self) -> bool:
        return all(v > 0 for v in self.table.flat)

    def axes(self, nodes) -> list[int]:
        pos = {v: i for i, v in enumerate(self.variables)}
        try:
            return [pos[v] for v in sorted(node_set(nodes))]
        except KeyError as exc:
            raise InputError(f"unknown variable {exc.args[0]!r}") from None

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.domains == other.domains
            and self.denominator == other.denominator
            and all(a == b for a, b in zip(self.table.flat, other.table.flat))
        )

    def __repr__(self):
        sizes = "x".join(str(len(d)) for d in self.domains)
        return f"DiscreteDistribution({', '.join(self.variables)}; {sizes})"


def _marginal(p: DiscreteDistribution, keep: list[int]) -> np.ndarray:
    drop = tuple(i for i in range(len(p.variables)) if i not in keep)
    m = p.table.sum(axis=drop) if drop else p.table
    m = np.asarray(m, dtype=object)
    # remaining axes come out in increasing order; reorder to ``keep``
    order = sorted(keep)
    return np.transpose(m, [order.index(k) for k in keep])


def ci_holds(p: DiscreteDistribution, x, z, y) -> bool:
    """Exact test of I(x, z, y) in ``p``.

    Checks P(x, y, z) P(z) = P(x, z) P(y, z) at every instantiation, which is
    the factorisation condition wherever P(z) > 0 and trivially true
    elsewhere.
    """
    ax, az, ay = p.axes(x), p.axes(z), p.axes(y)
    if not ax or not ay or set(ax) & set(ay) or set(ax) & set(az) or set(ay) & set(az):
        raise InputError("x, z, y must be disjoint with x and y nonempty")
    joint = _marginal(p, ax + ay + az)
    shape = joint.shape
    nx = math.prod(shape[: len(ax)])
    ny = math.prod(shape[len(ax): len(ax) + len(ay)])
    joint = joint.reshape(nx, ny, -1)
    pxz = joint.sum(axis=1)
    pyz = joint.sum(axis=0)
    pz = pxz.sum(axis=0)
    lhs = joint * pz[None, None, :]
    rhs = pxz[:, None, :] * pyz[None, :, :]
    return bool(np.all(lhs == rhs))


def ci_set(p: DiscreteDistribution) -> set[CiStatement]:
    """Every canonical statement over ``p.variables`` that holds in ``p``."""
    return {s for s in all_statements(p.variables) if ci_holds(p, s.x, s.z, s.y)}


def distribution_oracle(p: DiscreteDistribution):
    return lambda x, z, y: ci_holds(p, x, z, y)


def _pair_label(a: str, b: str) -> str:
    return f"<{a}|{b}>"


def armstrong_product(p1: DiscreteDistribution, p2: DiscreteDistribution) -> DiscreteDistribution:
    """Product over paired domains: P(a1 b1, ..., an bn) = P1(a1..an) P2(b1..bn).

    A statement holds in the result iff it holds in both factors.
    """
    if p1.variables != p2.variables:
        raise InputError(f"variable mismatch: {p1.variables} vs {p2.variables}")
    n = len(p1.variables)
    outer = np.multiply.outer(p1.table, p2.table)
    interleave = [k for i in range(n) for k in (i, n + i)]
    outer = np.transpose(outer, interleave)
    shape = [len(a) * len(b) for a, b in zip(p1.domains, p2.domains)]
    domains = [[_pair_label(a, b) for a in da for b in db] for da, db in zip(p1.domains, p2.domains)]
    return DiscreteDistribution(p1.variables, domains, outer.reshape(shape), p1.denominator * p2.denominator)


def armstrong_combine(ps: Sequence[DiscreteDistribution]) -> DiscreteDistribution:
    """Left fold of :func:`armstrong_product`."""
    ps = list(ps)
    if not ps:
        raise InputError("armstrong_combine needs at least one distribution")
    return reduce(armstrong_product, ps)


def _random_cpt_row(rng: np.random.Generator, k: int) -> list[int]:
    # k positive integers summing to CPT_DENOMINATOR
    cuts = np.sort(rng.choice(np.arange(1, CPT_DENOMINATOR), size=k - 1, replace=False))
    bounds = [0, *(int(c) for c in cuts), CPT_DENOMINATOR]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def _factorised(dag: Dag, rng: np.random.Generator, domain_size: int, row) -> DiscreteDistribution:
    n = len(dag)
    table = np.empty((domain_size,) * n, dtype=object)
    table[...] = 1
    for v in dag.topological_order:
        fam = [dag.index[p] for p in dag.parents[v]] + [dag.index[v]]
        cpt = np.empty((domain_size,) * len(fam), dtype=object)
        for cfg in product(range(domain_size), repeat=len(fam) - 1):
            cpt[cfg] = np.array(row(rng, domain_size), dtype=object)
        # broadcast the family table over the full joint
        order = sorted(range(len(fam)), key=lambda i: fam[i])
        cpt = np.transpose(cpt, order)
        shape = [1] * n
        for i in fam:
            shape[i] = domain_size
        table = table * cpt.reshape(shape)
    values = [str(a) for a in range(domain_size)]
    return DiscreteDistribution(dag.nodes, [values] * n, table, CPT_DENOMINATOR ** n)


def random_dag_distribution(dag: Dag, seed: int, domain_size: int = 2) -> DiscreteDistribution:
    """Strictly positive distribution that factorises along ``dag``.

    Each conditional table row is a random composition of CPT_DENOMINATOR,
    drawn from a generator seeded with ``seed``.
    """
    if domain_size < 2:
        raise InputError("domain_size must be at least 2")
    if domain_size >= CPT_DENOMINATOR:
        raise InputError(f"domain_size must be below {CPT_DENOMINATOR}")
    return _factorised(dag, np.random.default_rng(seed), domain_size, _random_cpt_row)


def _repair_seed(seed: int, index: int, attempt: int) -> int:
    return int(np.random.SeedSequence([seed, index, attempt]).generate_state(1)[0])


def perfect_map_distribution(
    dag: Dag,
    seed: int = 0,
    max_nodes: int = PERFECT_MAP_LIMIT,
    budget: int = REPAIR_BUDGET,
    domain_size: int = 2,
) -> DiscreteDistribution:
    """Distribution whose independencies are exactly the d-separations of ``dag``.

    Starts from one factorised distribution; every dependency it happens to
    satisfy is repaired by folding in another factorised distribution that
    violates it.
    """
    if len(dag) > max_nodes:
        raise ResourceLimitError(f"perfect map construction limited to {max_nodes} nodes, graph has {len(dag)}")
    target = list_verified_statements(dag)
    dependencies = [s for s in all_statements(dag.nodes) if s not in target]
    p = random_dag_distribution(dag, seed, domain_size)
    unrepaired = []
    for idx, dep in enumerate(dependencies):
        if not ci_holds(p, dep.x, dep.z, dep.y):
            continue
        for attempt in range(budget):
            q = random_dag_distribution(dag, _repair_seed(seed, idx, attempt), domain_size)
            if not ci_holds(q, dep.x, dep.z, dep.y):
                p = armstrong_product(p, q)
                break
        else:
            unrepaired.append(dep)
    if unrepaired:
        raise ResourceLimitError(
            "repair budget exhausted for " + ", ".join(str(s) for s in unrepaired)
        )
    if ci_set(p) != target:
        raise ResourceLimitError("repaired distribution still differs from the d-separation set")
    return p
