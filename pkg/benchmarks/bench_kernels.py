"""Compare the numba kernels with the plain-Python fallback.

Each workload runs in a fresh interpreter, once with numba and once with
``CILOGIC_DISABLE_NUMBA=1``.  Compilation happens in an untimed warm-up.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from cilogic import _kernels, StatementSet, closure, d_separated, list_verified_statements, statements_of, causal_list_of
from cilogic.graph import Dag, all_statements
from cilogic.verify import edge_subset_dags, random_dag
import numpy as np

repeat = int(sys.argv[1])
graphs5 = list(edge_subset_dags(5))
rng = np.random.default_rng(0)
big = [random_dag(rng, 7, min_nodes=7) for _ in range(20)]
chain = Dag.from_edges([(str(i), str(i + 1)) for i in range(300)] + [(str(i), str(i + 2)) for i in range(0, 298, 3)])
lists6 = [StatementSet.of(statements_of(causal_list_of(d)), d.nodes) for d in (random_dag(rng, 6, min_nodes=6) for _ in range(10))]

def table5():
    for d in graphs5:
        list_verified_statements(d)

def table7():
    for d in big:
        list_verified_statements(d, "id")

def queries():
    for k in range(0, 290, 7):
        d_separated(chain, str(k), {str(k + 5)}, str(k + 10))

def closures():
    for s in lists6:
        closure(s)

work = {"statement tables, all 5-node DAGs": table5, "ID tables, 20 random 7-node DAGs": table7,
        "d-separation queries, 301-node graph": queries, "semi-graphoid closure, 10 lists of 6": closures}
out = {"numba": _kernels.USE_NUMBA}
for name, fn in work.items():
    fn()  # warm-up / compile
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("CILOGIC_DISABLE_NUMBA", None)
    if disable:
        env["CILOGIC_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    if not fast.pop("numba"):
        print("numba unavailable; both columns use the fallback")
    slow.pop("numba")
    width = max(map(len, fast))
    print(f"{'workload':<{width}}  {'numba':>9}  {'python':>9}  speedup")
    for name in fast:
        print(f"{name:<{width}}  {fast[name]:8.4f}s  {slow[name]:8.4f}s  {slow[name] / fast[name]:6.1f}x")


if __name__ == "__main__":
    main()
