import pytest
from hypothesis import given, settings

from cilogic import (
    Dag,
    UndirectedPath,
    d_separated,
    determined_closure,
    enumerate_paths,
    id_separated,
    list_verified_statements,
    minimal_collider_active_path,
    path_is_active,
    requisite_nodes,
)
from cilogic.errors import InputError, LogicError, ResourceLimitError
from cilogic.graph import CiStatement

from conftest import dag_and_triple


def _p(dag, *nodes):
    return UndirectedPath.from_nodes(dag, nodes)


def test_path_is_active_examples(diamond):
    assert not path_is_active(diamond, _p(diamond, "2", "1", "3"), {"1"})
    assert not path_is_active(diamond, _p(diamond, "2", "4", "3"), {"1"})
    assert path_is_active(diamond, _p(diamond, "2", "4", "3"), {"1", "5"})
    with pytest.raises(InputError):
        path_is_active(diamond, _p(diamond, "2", "4", "3"), {"2"})


def test_d_separated_examples(diamond, pavement):
    assert d_separated(diamond, "2", "1", "3").separated
    v = d_separated(diamond, "2", {"1", "5"}, "3")
    assert not v.separated and v.witness.nodes == ("2", "4", "3")
    assert d_separated(diamond, "3", {"1", "2", "4"}, "5").separated
    assert d_separated(pavement, "alpha", (), "delta").separated
    assert not d_separated(pavement, "alpha", "gamma", "delta").separated


def test_overlap_rejected(diamond):
    with pytest.raises(InputError):
        d_separated(diamond, "2", {"2"}, "3")
    with pytest.raises(InputError):
        d_separated(diamond, {"2"}, (), {"2", "3"})


def test_determined_closure_examples():
    plain = Dag.from_edges([("a", "b"), ("b", "c")])
    assert determined_closure(plain, {"a"}) == {"a"}
    one = Dag.from_edges([("a", "b")], deterministic={"b"})
    assert determined_closure(one, {"a"}) == {"a", "b"}
    two = Dag.from_edges([("a", "b"), ("b", "c")], deterministic={"b", "c"})
    assert determined_closure(two, {"a"}) == {"a", "b", "c"}


def test_deterministic_worked_example(deterministic_dag):
    assert id_separated(deterministic_dag, "c", "a", "e").separated
    assert not d_separated(deterministic_dag, "c", "a", "e").separated
    v = id_separated(deterministic_dag, "c", (), "e")
    assert not v.separated and v.witness.nodes == ("c", "b", "e")


def test_list_verified_statements_examples(diamond):
    assert {str(s) for s in list_verified_statements(Dag(("a", "b")))} == {"I(a ; ; b)"}
    assert list_verified_statements(Dag.from_edges([("a", "b")])) == set()
    verified = list_verified_statements(diamond)
    assert CiStatement("2", "1", "3") in verified
    assert CiStatement("3", {"1", "2", "4"}, "5") in verified
    assert CiStatement("2", {"1", "5"}, "3") not in verified
    big = Dag(tuple("abcdefgh"))
    with pytest.raises(ResourceLimitError):
        list_verified_statements(big)
    with pytest.raises(InputError):
        list_verified_statements(diamond, mode="q")


def test_minimal_collider_path_examples(diamond):
    path, colliders = minimal_collider_active_path(diamond, "2", "3", {"1", "5"})
    assert path.nodes == ("2", "4", "3") and colliders == ["4"]
    path, colliders = minimal_collider_active_path(diamond, "2", "3", ())
    assert path.nodes == ("2", "1", "3") and colliders == []
    chain = Dag.from_edges([("a", "b"), ("b", "c")])
    path, colliders = minimal_collider_active_path(chain, "a", "c", ())
    assert path.nodes == ("a", "b", "c") and colliders == []
    with pytest.raises(LogicError):
        minimal_collider_active_path(diamond, "2", "3", {"1"})


def test_requisite_examples(diamond):
    assert requisite_nodes(Dag(("r", "s")), {"r"}, ()) == {"r"}
    assert requisite_nodes(diamond, {"2"}, {"1"}) == {"1", "2"}
    assert requisite_nodes(diamond, {"5"}, {"2"}) == {"1", "2", "3", "4", "5"}
    with pytest.raises(InputError):
        requisite_nodes(diamond, {"2"}, {"2"})


def test_requisite_drops_separated_ancestor():
    # a -> b -> c; given b, a cannot influence P(c | b)
    chain = Dag.from_edges([("a", "b"), ("b", "c")])
    assert requisite_nodes(chain, {"c"}, {"b"}) == {"b", "c"}


@settings(max_examples=150, deadline=None)
@given(dag_and_triple())
def test_verdict_matches_path_definition(case):
    dag, x, z, y = case
    verdict = d_separated(dag, x, z, y)
    active = any(path_is_active(dag, p, z) for a in x for b in y for p in enumerate_paths(dag, a, b))
    assert verdict.separated == (not active)
    assert verdict.separated == d_separated(dag, y, z, x).separated
    if not verdict.separated:
        w = verdict.witness
        assert w.nodes[0] in x and w.nodes[-1] in y
        assert path_is_active(dag, w, z)


@settings(max_examples=150, deadline=None)
@given(dag_and_triple(deterministic=True))
def test_id_separation_properties(case):
    dag, x, z, y = case
    d = d_separated(dag, x, z, y).separated
    i = id_separated(dag, x, z, y)
    assert i.separated == id_separated(dag, y, z, x).separated
    if d:
        assert i.separated
    plain = Dag(dag.nodes, dag.edges)
    assert id_separated(plain, x, z, y).separated == d_separated(plain, x, z, y).separated
    if not i.separated:
        assert path_is_active(dag, i.witness, z, determined_closure(dag, z))


@settings(max_examples=100, deadline=None)
@given(dag_and_triple())
def test_minimal_collider_path_is_minimal(case):
    dag, x, z, y = case
    a, b = min(x), min(y)
    if d_separated(dag, a, z, b).separated:
        return
    path, colliders = minimal_collider_active_path(dag, a, b, z)
    assert path_is_active(dag, path, z)
    active = [p for p in enumerate_paths(dag, a, b) if path_is_active(dag, p, z)]
    best = min((len(p.colliders), len(p), p.nodes) for p in active)
    assert (len(colliders), len(path), path.nodes) == best


@settings(max_examples=60, deadline=None)
@given(dag_and_triple(max_nodes=5))
def test_graph_level_decomposition(case):
    dag, x, z, y = case
    if len(y) > 1 and d_separated(dag, x, z, y).separated:
        for v in y:
            assert d_separated(dag, x, z, {v}).separated
