#!/usr/bin/env python3
"""Compare the compiled and plain enumeration backends on identical inputs.

Times three workloads per backend: counting acyclic orientations of a dense
skeleton, enumerating the three-way mark assignments of a boundary-sized
graph, and the end-to-end treewidth engine on structured inputs.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import random
import time

from meccount import (
    UndirectedGraph,
    brute_count_mecs,
    brute_count_mecs_andersson,
    count_mecs,
    current_backend,
    enumerate_partial_mecs,
    set_backend,
)
from meccount._kernels import HAVE_NUMBA


def path_graph(n):
    return UndirectedGraph(edges=[(i, i + 1) for i in range(n - 1)])


def random_graph(seed, n, max_degree):
    rng = random.Random(seed)
    while True:
        labels = list(range(n))
        edges = set()
        deg = {v: 0 for v in labels}
        order = labels[:]
        rng.shuffle(order)
        ok = True
        for i in range(1, n):
            cand = [u for u in order[:i] if deg[u] < max_degree]
            if not cand:
                ok = False
                break
            u = rng.choice(cand)
            edges.add((min(u, order[i]), max(u, order[i])))
            deg[u] += 1
            deg[order[i]] += 1
        if not ok:
            continue
        for _ in range(n):
            u, v = rng.sample(labels, 2)
            e = (min(u, v), max(u, v))
            if e not in edges and deg[u] < max_degree and deg[v] < max_degree:
                edges.add(e)
                deg[u] += 1
                deg[v] += 1
        return UndirectedGraph(vertices=labels, edges=sorted(edges))


WORKLOADS = [
    (
        "orientation count, n=8 m=16",
        lambda: brute_count_mecs(random_graph(1, 8, 4)),
    ),
    (
        "mark filter (classes), n=6 m=10",
        lambda: brute_count_mecs_andersson(random_graph(2, 6, 4), max_edges=12),
    ),
    (
        "mark enumeration (boundary), n=6 m=10",
        lambda: sum(1 for _ in enumerate_partial_mecs(random_graph(2, 6, 4))),
    ),
    (
        "engine, path n=60",
        lambda: count_mecs(path_graph(60), "fpt"),
    ),
    (
        "engine, random n=8 deg<=4",
        lambda: count_mecs(random_graph(3, 8, 4), "fpt"),
    ),
]


def run(repeat: int) -> None:
    backends = ["python"] + (["numba"] if HAVE_NUMBA else [])
    if not HAVE_NUMBA:
        print("numba not installed; timing the python backend only")
    results = {}
    for backend in backends:
        set_backend(backend)
        assert current_backend() == backend
        for name, fn in WORKLOADS:
            fn()  # warm (JIT compile / cache load)
            best = min(_time_once(fn)[0] for _ in range(repeat))
            results[(backend, name)] = (best, _time_once(fn)[1])
    set_backend("auto")
    width = max(len(name) for name, _ in WORKLOADS)
    header = f"{'workload':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, _ in WORKLOADS:
        row = f"{name:<{width}}  "
        for b in backends:
            row += f"{results[(b, name)][0] * 1e3:>10.1f}ms"
        if len(backends) == 2:
            py = results[("python", name)][0]
            nb = results[("numba", name)][0]
            row += f"{py / nb:>9.1f}x"
        print(row)
    for name, _ in WORKLOADS:
        outs = {results[(b, name)][1] for b in backends}
        assert len(outs) == 1, f"backends disagree on {name}: {outs}"
    print("backends agree on all workload outputs")


def _time_once(fn):
    t0 = time.perf_counter()
    out = fn()
    return time.perf_counter() - t0, out


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    run(ap.parse_args().repeat)
