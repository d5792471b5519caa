"""The ten acceptance criteria, each at its stated time limit.

Every test records a one-line verdict; the lines are printed at the end of
the pytest run (see ``conftest.py``) and when this file is run directly::

    python3 tests/test_acceptance.py
"""

import sys
import time
from fractions import Fraction

import pytest

from cilogic import CausalInputList, Dag, build_dag, d_separated, id_separated
from cilogic.verify import (
    sweep_armstrong,
    sweep_completeness,
    sweep_id_separation,
    sweep_minimal_imap,
    sweep_perfect_map,
    sweep_separation_oracle,
    sweep_soundness,
    sweep_closure_equivalence,
    sweep_witness_structure,
    warm_kernels,
    wet_pavement_dag,
)

VERDICTS: dict[int, str] = {}
MINUTE = 60.0


def record(number, title, passed, seconds, limit, detail=""):
    within = limit is None or seconds < limit
    status = "PASS" if passed and within else "FAIL"
    budget = "no limit" if limit is None else f"limit {limit:.0f}s"
    line = f"criterion {number:2d} {status}  {title}  ({seconds:.1f}s, {budget}){'  ' + detail if detail else ''}"
    VERDICTS[number] = line
    return passed and within


def run_sweep(number, title, sweep, limit, **kwargs):
    result = sweep(**kwargs)
    detail = f"{result.checked} checks, {len(result.failures)} failures"
    ok = record(number, title, result.passed, result.seconds, limit, detail)
    assert result.passed, result.failures[:5]
    assert ok, f"took {result.seconds:.1f}s, limit {limit}s"
    return result


def test_criterion_1_worked_examples():
    # one-time JIT compilation is reported, not counted against the query budget
    compile_seconds = warm_kernels()
    start = time.perf_counter()
    L = CausalInputList(
        ("1", "2", "3", "4", "5"),
        {"2": {"1"}, "3": {"1"}, "4": {"2", "3"}, "5": {"4"}},
    )
    diamond = build_dag(L)
    checks = [
        d_separated(diamond, "2", "1", "3").separated,
        d_separated(diamond, "3", {"1", "2", "4"}, "5").separated,
    ]
    v = d_separated(diamond, "2", {"1", "5"}, "3")
    checks += [not v.separated, v.witness is not None and v.witness.nodes == ("2", "4", "3")]
    pavement = wet_pavement_dag()
    checks += [
        d_separated(pavement, "alpha", (), "delta").separated,
        not d_separated(pavement, "alpha", "gamma", "delta").separated,
    ]
    seconds = time.perf_counter() - start
    detail = f"{sum(checks)}/{len(checks)} verdicts, kernel compile/load {compile_seconds:.1f}s untimed"
    ok = record(1, "worked examples", all(checks), seconds, 1.0, detail)
    assert all(checks)
    assert ok


@pytest.mark.slow
def test_criterion_2_separation_oracle():
    res = run_sweep(2, "d_separated vs path enumeration, <=5 nodes", sweep_separation_oracle, 5 * MINUTE, max_nodes=5)
    assert res.details["graphs"] >= 2**10


def test_criterion_3_theorem2():
    run_sweep(3, "closure of causal list = d-separation, 200 DAGs", sweep_closure_equivalence, 10 * MINUTE, count=200, max_nodes=5, seed=0)


def test_criterion_4_soundness():
    run_sweep(4, "d-separated => ci_holds, 100 (DAG, seed) pairs", sweep_soundness, 10 * MINUTE, count=100, max_nodes=5, seed=0)


def test_criterion_5_completeness():
    run_sweep(5, "Gaussian witnesses, diamond DAG and all DAGs <=4 nodes", sweep_completeness, 10 * MINUTE,
              max_nodes=4, rho=Fraction(1, 2), include_diamond=True)


def test_criterion_6_witness_structure():
    run_sweep(6, "witness paths disjoint, meet q at colliders, forest", sweep_witness_structure, 10 * MINUTE,
              max_nodes=4, rho=Fraction(1, 2), include_diamond=True)


def test_criterion_7_armstrong():
    res = run_sweep(7, "Armstrong product, 100 pairs over 4 binary vars", sweep_armstrong, 5 * MINUTE, count=100, n_vars=4, seed=0)
    assert res.details["pairs_with_independencies"] > 0


def test_criterion_8_perfect_map():
    run_sweep(8, "perfect map, diamond DAG and all DAGs <=4 nodes", sweep_perfect_map, 15 * MINUTE,
              max_nodes=4, seed=0, include_diamond=True)


@pytest.mark.slow
def test_criterion_9_id_separation():
    start = time.perf_counter()
    det = Dag.from_edges([("a", "b"), ("b", "c"), ("b", "e")], deterministic={"b"})
    worked = [
        id_separated(det, "c", "a", "e").separated,
        not d_separated(det, "c", "a", "e").separated,
        not id_separated(det, "c", (), "e").separated,
    ]
    result = sweep_id_separation(max_nodes=5)
    seconds = time.perf_counter() - start
    detail = f"{result.checked} checks, {len(result.failures)} failures, worked example {sum(worked)}/3"
    record(9, "ID-separation consistency, <=5 nodes", result.passed and all(worked), seconds, None, detail)
    assert all(worked)
    assert result.passed, result.failures[:5]


def test_criterion_10_minimal_imap():
    run_sweep(10, "minimal I-map fixpoint, every topological order", sweep_minimal_imap, 10 * MINUTE, max_nodes=5)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[2]))
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
        n = int(t.__name__.split("_")[2])
        print(VERDICTS.get(n, f"criterion {n:2d} FAIL  (raised before recording)"), flush=True)
    sys.exit(1 if failed else 0)
