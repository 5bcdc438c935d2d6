#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--rows N] [--mc-samples N]

The first numba call per kernel includes JIT compilation; a warmup pass
absorbs it (and `cache=True` persists it across runs). Figure-sized loads
(a few thousand rows) are too small to care about; the sizes here match a
dense custom sweep and a large Monte Carlo estimate, where the jitted
loops are the hot path.
"""

import argparse
import time

import numpy as np

from irsmec import kernels

REPEATS = 7


def best_of(fn, *args):
    fn(*args)  # warmup (JIT compile on the numba side)
    times = []
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def bench(name, np_fn, nb_fn, *args):
    t_np = best_of(np_fn, *args)
    if kernels.HAVE_NUMBA:
        t_nb = best_of(nb_fn, *args)
        speedup = t_np / t_nb
        print(f"{name:<28} numpy {t_np * 1e3:8.2f} ms   numba {t_nb * 1e3:8.2f} ms   "
              f"x{speedup:.2f}")
    else:
        print(f"{name:<28} numpy {t_np * 1e3:8.2f} ms   numba unavailable")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=2_000_000)
    parser.add_argument("--mc-samples", type=int, default=10_000_000)
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    n = args.rows
    print(f"rows={n:,}  mc_samples={args.mc_samples:,}  repeats={REPEATS}\n")

    dist = np.ascontiguousarray(rng.uniform(1.0, 500.0, n))
    bench("power_direct_rows", kernels._power_direct_np, kernels._power_direct_nb,
          dist, 5.0, 1.0, 5.5)

    d1 = np.ascontiguousarray(rng.uniform(5.0, 200.0, n))
    d2 = np.ascontiguousarray(rng.uniform(5.0, 200.0, n))
    bench("power_irs_rows", kernels._power_irs_np, kernels._power_irs_nb, d1, d2, 2122.4)

    bw = np.ascontiguousarray(rng.uniform(1e5, 1e7, n))
    p = np.ascontiguousarray(rng.uniform(1e-14, 1e-8, n))
    bench("throughput_rows", kernels._throughput_np, kernels._throughput_nb,
          bw, p, 3.679e-13)

    data = np.ascontiguousarray(rng.uniform(100.0, 20000.0, n))
    rate = np.ascontiguousarray(rng.uniform(1e5, 1e8, n))
    bench("offload_latency_rows", kernels._offload_np, kernels._offload_nb,
          data, rate, 1000.0, 8e9)

    u = np.ascontiguousarray(1.0 - rng.random(args.mc_samples))
    bench("mc_throughput_stats", kernels._mc_stats_np, kernels._mc_stats_nb, u, 1e6, 3.0)


if __name__ == "__main__":
    main()
