import pytest
from hypothesis import given

from cilogic import CiStatement, Dag, UndirectedPath, all_statements, ancestors, descendants, enumerate_paths, topological_order
from cilogic.errors import InputError, ResourceLimitError, StructuralError

from conftest import dags


def test_topological_order_examples(diamond):
    assert topological_order(Dag(("b", "a"))) == ["a", "b"]
    assert topological_order(diamond) == ["1", "2", "3", "4", "5"]
    assert topological_order(Dag.from_edges([("b", "a")])) == ["b", "a"]


def test_cycle_is_named():
    with pytest.raises(StructuralError) as info:
        Dag.from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")])
    cycle = info.value.cycle
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {"a", "b", "c"}


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(nodes=("a", "a")),
        dict(nodes=("a",), edges=frozenset({("a", "b")})),
        dict(nodes=("a",), deterministic=frozenset({"z"})),
    ],
)
def test_invalid_dags(kwargs):
    with pytest.raises(InputError):
        Dag(**kwargs)


def test_self_loop():
    with pytest.raises(StructuralError):
        Dag.from_edges([("a", "a")])


def test_ancestors_examples(diamond):
    assert ancestors(diamond, {"5"}) == {"1", "2", "3", "4", "5"}
    assert ancestors(diamond, {"1"}) == {"1"}
    assert ancestors(diamond, {"2", "3"}) == {"1", "2", "3"}
    assert descendants(diamond, {"2"}) == {"2", "4", "5"}
    with pytest.raises(InputError):
        ancestors(diamond, {"9"})


def test_enumerate_paths_examples(diamond):
    paths = enumerate_paths(diamond, "2", "3")
    assert [p.nodes for p in paths] == [("2", "1", "3"), ("2", "4", "3")]
    assert [p.colliders for p in paths] == [[], ["4"]]
    assert enumerate_paths(Dag(("a", "b")), "a", "b") == []
    chain = Dag.from_edges([("a", "b"), ("b", "c")])
    (only,) = enumerate_paths(chain, "a", "c")
    assert only.nodes == ("a", "b", "c") and only.colliders == []
    assert len(only) == 2


def test_enumerate_paths_guard():
    big = Dag.from_edges([(str(i), str(i + 1)) for i in range(13)])
    with pytest.raises(ResourceLimitError):
        enumerate_paths(big, "0", "13")
    assert len(enumerate_paths(big, "0", "13", max_nodes=20)) == 1


def test_undirected_path_validation(diamond):
    with pytest.raises(InputError):
        UndirectedPath.from_nodes(diamond, ["2", "3"])
    with pytest.raises(InputError):
        UndirectedPath.from_nodes(diamond, ["2", "1", "2"])


def test_statement_canonical_form():
    s = CiStatement({"b"}, {"c"}, {"a"})
    assert s == CiStatement({"a"}, {"c"}, {"b"})
    assert s.x == {"a"} and str(s) == "I(a ; c ; b)"
    assert str(CiStatement("a", (), "b")) == "I(a ; ; b)"
    with pytest.raises(InputError):
        CiStatement({"a"}, {"a"}, {"b"})
    with pytest.raises(InputError):
        CiStatement(set(), set(), {"b"})


def test_all_statements_counts():
    # two nodes: only I(a;;b); three nodes: 3 pairs x {with/without z} + 3 set-vs-node
    assert [str(s) for s in all_statements(["a", "b"])] == ["I(a ; ; b)"]
    assert len(all_statements(list("abc"))) == 9
    # (4^n - 2*3^n + 2^n) / 2 ordered-pair assignments counted once
    assert len(all_statements(list("abcde"))) == (4**5 - 2 * 3**5 + 2**5) // 2


@given(dags(max_nodes=7))
def test_topological_order_respects_edges(dag):
    order = topological_order(dag)
    assert sorted(order) == list(dag.nodes)
    pos = {v: i for i, v in enumerate(order)}
    assert all(pos[p] < pos[c] for p, c in dag.edges)


@given(dags(max_nodes=6))
def test_ancestors_monotone_idempotent(dag):
    for i, v in enumerate(dag.nodes):
        s = set(dag.nodes[: i + 1])
        a = ancestors(dag, s)
        assert ancestors(dag, a) == a
        assert ancestors(dag, {v}) <= a


@given(dags(max_nodes=6, min_nodes=2))
def test_paths_simple_with_correct_flags(dag):
    a, b = dag.nodes[0], dag.nodes[-1]
    for p in enumerate_paths(dag, a, b):
        assert len(set(p.nodes)) == len(p.nodes)
        for j in range(1, len(p.nodes) - 1):
            into = dag.has_edge(p.nodes[j - 1], p.nodes[j]) and dag.has_edge(p.nodes[j + 1], p.nodes[j])
            assert p.collider_flags[j] == into
