"""Compare the compiled and pure-Python kernels on the hot enumeration loops.

    python3 benchmarks/bench_kernels.py [--n 7] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from biasedclique import kernels
from biasedclique.bipartite import _theta_index_rows, bipartite_circuit_keys
from biasedclique.circuits import Circuit


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, result = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def all_thetas(impl, n: int):
    adj = kernels.complete_adjacency(n)
    total = 0
    for x in range(1, n + 1):
        for y in range(x + 1, n + 1):
            total += len(kernels.theta_block(adj, n, x, y, impl)[0])
    return total


def cases(n: int):
    adj = kernels.complete_adjacency(n)
    ham = Circuit(range(1, n + 1)).key
    rows = _theta_index_rows(3, 4)
    size = len(bipartite_circuit_keys(3, 4))
    stop = int(np.count_nonzero((bipartite_circuit_keys(3, 4) >> np.uint64(60)) == 4))
    return [
        (f"circuit_keys K_{n}", lambda impl: len(kernels.circuit_keys(adj, n, impl))),
        (f"theta blocks K_{n}", lambda impl: all_thetas(impl, n)),
        (f"ear thetas of a Hamilton circuit of K_{n}", lambda impl: len(kernels.ear_thetas(adj, n, ham, impl)[0])),
        ("theta assignments K_{3,4} (4-circuit projections)", lambda impl: len(kernels.theta_assignments(rows, size, stop, impl=impl))),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    impls = {"python": kernels.backend("python")}
    try:
        impls["cython"] = kernels.backend("cython")
    except ImportError:
        print("compiled kernels not built; timing the Python backend only")
    print(f"{'case':52s} " + " ".join(f"{k:>10s}" for k in impls) + "   speedup")
    for name, fn in cases(args.n):
        times, results = {}, set()
        for label, impl in impls.items():
            times[label], res = best_of(lambda: fn(impl), args.repeat)
            results.add(res)
        if len(results) != 1:
            raise SystemExit(f"backends disagree on {name}: {results}")
        row = " ".join(f"{times[k]:9.4f}s" for k in impls)
        speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else ""
        print(f"{name:52s} {row} {speed}")


if __name__ == "__main__":
    main()
