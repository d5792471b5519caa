"""Conditional-independence reasoning over DAGs.

Separation queries (d- and ID-separation), causal input lists, semi-graphoid
closure, exact Gaussian counterexamples and exact discrete distributions.
"""

from .causal import CausalInputList, IndependenceOracle, build_dag, causal_list_of, dag_oracle, minimal_imap, statements_of
from .discrete import (
    DiscreteDistribution,
    armstrong_combine,
    armstrong_product,
    ci_holds,
    ci_set,
    distribution_oracle,
    perfect_map_distribution,
    random_dag_distribution,
)
from .errors import CiLogicError, InputError, LogicError, NumericError, ParseError, ResourceLimitError, StructuralError
from .gaussian import (
    CovarianceMatrix,
    WitnessConstruction,
    WitnessReport,
    construct_witness,
    gaussian_ci,
    partial_covariance,
    verify_witness,
)
from .graph import CiStatement, Dag, UndirectedPath, all_statements, ancestors, descendants, enumerate_paths, topological_order
from .semigraphoid import StatementSet, closure, derives
from .separation import (
    SeparationVerdict,
    d_separated,
    determined_closure,
    id_separated,
    list_verified_statements,
    minimal_collider_active_path,
    path_is_active,
    requisite_nodes,
)

__version__ = "0.1.0"

__all__ = [n for n, v in globals().items() if not n.startswith("_") and not isinstance(v, type(__import__("sys")))]
