#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Covers the hot paths: breadth-first closure of the full depth-4 group,
derived subgroup of a 16384-element index-2 subgroup, and raw composition
throughput.  Run after `pip install -e .`:

    python benchmarks/bench_closure.py
"""

import random
import statistics
import time

from treegrp import kernel
from treegrp.portrait import generators
from treegrp.subgroups import _FULL_GROUP_CACHE, derived_subgroup, enumerate_PJ


def timeit(fn, repeats=3):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times), statistics.mean(times)


def bench_backend(name):
    kernel.set_backend(name)
    results = {}

    gens4 = [g.bits for g in generators(4)]
    results["close G(4) [32768 els]"] = timeit(
        lambda: kernel.close(4, gens4, 1 << 26)
    )

    rng = random.Random(0)
    pairs = [(rng.getrandbits(15), rng.getrandbits(15)) for _ in range(20_000)]

    def compose_burst():
        for h, g in pairs:
            kernel.compose(h, g, 4)

    results["compose x20k (d=4)"] = timeit(compose_burst)

    _FULL_GROUP_CACHE.clear()
    pj = enumerate_PJ(4, {3})
    results["derived of P_{3} in G(4)"] = timeit(
        lambda: derived_subgroup(pj), repeats=1
    )
    return results


def main():
    backends = ["pure"]
    if kernel.has_c_kernel():
        backends.insert(0, "c")
    else:
        print("compiled kernel not available; benchmarking pure backend only")

    table = {b: bench_backend(b) for b in backends}
    kernel.set_backend("auto")

    labels = list(next(iter(table.values())))
    width = max(len(s) for s in labels) + 2
    header = f"{'benchmark':<{width}}" + "".join(f"{b + ' (best s)':>16}" for b in backends)
    print(header)
    print("-" * len(header))
    for label in labels:
        row = f"{label:<{width}}"
        for b in backends:
            row += f"{table[b][label][0]:>16.4f}"
        print(row)
    if len(backends) == 2:
        print()
        for label in labels:
            speedup = table["pure"][label][0] / table["c"][label][0]
            print(f"speedup {label}: {speedup:.1f}x")


if __name__ == "__main__":
    main()
