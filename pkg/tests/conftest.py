import numpy as np
import pytest
from hypothesis import strategies as st

from cilogic import CausalInputList, Dag
from cilogic.verify import diamond_dag, wet_pavement_dag


@pytest.fixture
def diamond():
    return diamond_dag()


@pytest.fixture
def pavement():
    return wet_pavement_dag()


@pytest.fixture
def diamond_list():
    return CausalInputList(
        ("1", "2", "3", "4", "5"),
        {"1": frozenset(), "2": {"1"}, "3": {"1"}, "4": {"2", "3"}, "5": {"4"}},
    )


@pytest.fixture
def deterministic_dag():
    return Dag.from_edges([("a", "b"), ("b", "c"), ("b", "e")], deterministic={"b"})


@st.composite
def dags(draw, max_nodes=5, min_nodes=1, deterministic=False):
    n = draw(st.integers(min_nodes, max_nodes))
    names = [chr(ord("a") + i) for i in range(n)]
    order = draw(st.permutations(names))
    edges = [
        (order[i], order[j])
        for i in range(n)
        for j in range(i + 1, n)
        if draw(st.booleans())
    ]
    det = draw(st.sets(st.sampled_from(names))) if deterministic else set()
    return Dag(tuple(names), frozenset(edges), frozenset(det))


@st.composite
def dag_and_triple(draw, max_nodes=5, deterministic=False):
    dag = draw(dags(max_nodes=max_nodes, min_nodes=2, deterministic=deterministic))
    roles = draw(st.lists(st.sampled_from("xzyn"), min_size=len(dag), max_size=len(dag)))
    nodes = list(dag.nodes)
    a, b = draw(st.permutations(nodes))[:2]
    x = ({v for v, r in zip(nodes, roles) if r == "x"} | {a}) - {b}
    y = ({v for v, r in zip(nodes, roles) if r == "y"} | {b}) - x
    z = {v for v, r in zip(nodes, roles) if r == "z"} - x - y
    return dag, frozenset(x), frozenset(z), frozenset(y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
