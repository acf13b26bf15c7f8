#!/usr/bin/env python3
"""Benchmark the numba-jitted kernels against the pure-numpy fallback.

Run: python benchmarks/bench_kernels.py

Covers the three hot paths: full-configuration enumeration, batch wall
counting, and batch configuration realization. Both backends are invoked
directly (no env juggling); the numba path is warmed before timing so JIT
compilation never contaminates a measurement.
"""

import time

import numpy as np

from ringtherm import kernels


def timeit(fn, *args, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def row(label, numpy_s, numba_s):
    speedup = numpy_s / numba_s if numba_s > 0 else float("inf")
    print(f"{label:44s} numpy {numpy_s * 1e3:9.2f} ms   numba {numba_s * 1e3:9.2f} ms   x{speedup:5.1f}")


def main():
    if "numba" not in kernels.IMPLEMENTATIONS:
        print("numba unavailable; nothing to compare")
        return
    np_impl = kernels.IMPLEMENTATIONS["numpy"]
    nb_impl = kernels.IMPLEMENTATIONS["numba"]

    print(f"active backend: {kernels.BACKEND}\n")

    # enumeration of all 2^n ring configurations
    for n in (17, 21):
        nb_impl["wall_degeneracy"](3)  # warm
        row(
            f"wall_degeneracy(n={n}) [{2**n:,} configs]",
            timeit(np_impl["wall_degeneracy"], n),
            timeit(nb_impl["wall_degeneracy"], n),
        )

    # batch domain-wall counting
    rng = np.random.default_rng(0)
    for shape in ((20_000, 301), (2_000, 4001)):
        spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=shape)
        nb_impl["count_walls_batch"](spins[:2])
        row(
            f"count_walls_batch{shape}",
            timeit(np_impl["count_walls_batch"], spins),
            timeit(nb_impl["count_walls_batch"], spins),
        )

    # batch configuration realization from pre-drawn uniforms
    for m, n in ((20_000, 301), (2_000, 4001)):
        counts = rng.choice(np.arange(1, n // 2, 2), size=m)
        sel_u = rng.random((m, int(counts.max())))
        sign = rng.integers(0, 2, size=m, dtype=np.uint8)
        nb_impl["realize_configs"](n, counts[:2], sel_u[:2], sign[:2])
        a = np_impl["realize_configs"](n, counts, sel_u, sign)
        b = nb_impl["realize_configs"](n, counts, sel_u, sign)
        assert np.array_equal(a, b), "backends disagree"
        row(
            f"realize_configs(m={m}, n={n})",
            timeit(np_impl["realize_configs"], n, counts, sel_u, sign),
            timeit(nb_impl["realize_configs"], n, counts, sel_u, sign),
        )


if __name__ == "__main__":
    main()
