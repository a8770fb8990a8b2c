#!/usr/bin/env python3
"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from qusort import kernels
from qusort.gates import mqs


def best_of(fn, repeat):
    fn()  # warm-up (numba compile / cache load)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def report(name, t_numba, t_numpy):
    print(f"{name:<34} numba {t_numba * 1e3:9.3f} ms   numpy {t_numpy * 1e3:9.3f} ms   ratio {t_numpy / t_numba:6.2f}x")


def bench_apply(d, repeat):
    rng = np.random.default_rng(0)
    dims = np.array((d, d, d, d))
    n = d**4
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    gate = np.ascontiguousarray(mqs(d).matrix)
    targets = np.array((2, 3))
    a = kernels.apply_gate_numba(v, dims, targets, gate)
    b = kernels.apply_gate_numpy(v, dims, targets, gate)
    assert np.array_equal(a, b)
    report(
        f"apply MQS, D={d} ({n} amps)",
        best_of(lambda: kernels.apply_gate_numba(v, dims, targets, gate), repeat),
        best_of(lambda: kernels.apply_gate_numpy(v, dims, targets, gate), repeat),
    )


def bench_marginal(d, repeat):
    rng = np.random.default_rng(1)
    dims = np.array((d, d, d, d))
    v = rng.normal(size=d**4) + 1j * rng.normal(size=d**4)
    regs = np.array((1, 3))
    report(
        f"marginal ports, D={d}",
        best_of(lambda: kernels.marginal_numba(v, dims, regs), repeat),
        best_of(lambda: kernels.marginal_numpy(v, dims, regs), repeat),
    )


def bench_sample(outcomes, shots, repeat):
    rng = np.random.default_rng(2)
    cdf = np.cumsum(rng.dirichlet(np.ones(outcomes)))
    a = kernels.sample_counts_numba(cdf, shots, np.uint64(42))
    b = kernels.sample_counts_numpy(cdf, shots, 42)
    assert np.array_equal(a, b)
    report(
        f"sample {shots} shots, {outcomes} bins",
        best_of(lambda: kernels.sample_counts_numba(cdf, shots, np.uint64(42)), repeat),
        best_of(lambda: kernels.sample_counts_numpy(cdf, shots, 42), repeat),
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    for d in (4, 8, 16):
        bench_apply(d, args.repeat)
    for d in (8, 16):
        bench_marginal(d, args.repeat)
    for outcomes, shots in ((4, 100_000), (64, 1_000_000)):
        bench_sample(outcomes, shots, args.repeat)


if __name__ == "__main__":
    main()
