#!/usr/bin/env python3
"""Benchmark the numba-jitted kernels against the pure-numpy fallbacks.

Covers both hot kernels: the Miller-recurrence Bessel row and the exact
joint-spectrum accumulators.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from spdcsim import _kernels
from spdcsim.elements import build_comb

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def timeit(func, *args, repeats=5, inner=1):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            func(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def bench_bessel(jit_row):
    x, n_max = 20.0, 96
    start = n_max + 36
    args = (x, n_max, start)
    if jit_row is not None:
        jit_row(*args)  # compile
    rows = {}
    rows["numpy"] = timeit(_kernels._bessel_row_loops, *args, inner=200)
    if jit_row is not None:
        rows["numba"] = timeit(jit_row, *args, inner=200)
    return rows


def bench_accumulators(jit_inter, jit_intra):
    n, m_ratio = 1024, 2
    comb = build_comb(1.0, 1.5)
    rng = np.random.default_rng(0)
    field_c = rng.normal(size=n) + 1j * rng.normal(size=n)
    field_r = np.abs(field_c)
    results = {}

    def run_numpy_inter():
        amp = np.zeros((n, n), dtype=complex)
        _kernels._accumulate_inter_numpy(
            amp, field_c, comb.orders, comb.weights, comb.orders, comb.weights, m_ratio
        )

    def run_numpy_intra():
        amp = np.zeros((n, n))
        _kernels._accumulate_intra_numpy(
            amp, field_r, comb.orders, comb.weights, comb.orders, comb.weights, m_ratio
        )

    results["inter/numpy"] = timeit(run_numpy_inter)
    results["intra/numpy"] = timeit(run_numpy_intra)

    if jit_inter is not None:
        def run_numba_inter():
            amp = np.zeros((n, n), dtype=complex)
            jit_inter(amp, field_c, comb.orders, comb.weights, comb.orders, comb.weights, m_ratio)

        def run_numba_intra():
            amp = np.zeros((n, n))
            jit_intra(amp, field_r, comb.orders, comb.weights, comb.orders, comb.weights, m_ratio)

        run_numba_inter()  # compile
        run_numba_intra()
        results["inter/numba"] = timeit(run_numba_inter)
        results["intra/numba"] = timeit(run_numba_intra)
    return results


def main():
    if HAVE_NUMBA:
        jit_row = njit(cache=True)(_kernels._bessel_row_loops)
        jit_inter = njit(cache=True)(_kernels._accumulate_inter_loops)
        jit_intra = njit(cache=True)(_kernels._accumulate_intra_loops)
    else:
        print("numba not available; timing the numpy paths only")
        jit_row = jit_inter = jit_intra = None

    print(f"selected path in this environment: {'numba' if _kernels.USING_NUMBA else 'numpy'}")
    print()
    print("bessel row (x=20, orders 0..96):")
    for name, t in bench_bessel(jit_row).items():
        print(f"  {name:<12} {t * 1e6:9.1f} us")
    print("joint-spectrum accumulation (1024x1024 grid, ~500 sideband pairs):")
    for name, t in bench_accumulators(jit_inter, jit_intra).items():
        print(f"  {name:<12} {t * 1e3:9.2f} ms")


if __name__ == "__main__":
    main()
