#!/usr/bin/env python3
"""Benchmark the compiled response kernel against the pure-numpy fallback.

The kernel is the hot loop of the exact spectrum: one 4x4 complex inversion
plus a weighted contraction per frequency.  Run from the repository root:

    python3 benchmarks/bench_kernels.py [n_frequencies]
"""
import sys
import time

import numpy as np

from optocool import Observable, SystemParams, build_linear_system
from optocool import _kernels_py
from optocool.exact import COND_LIMIT, _response_setup

try:
    from optocool import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def bench(kernels, drift, noise, weights, coef, omega, repeats=5):
    out = np.empty(len(omega))
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        bad = kernels.weighted_response_grid(drift, noise, weights, coef, omega,
                                             COND_LIMIT, out)
        best = min(best, time.perf_counter() - t0)
    assert bad == -1
    return best, out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    params = SystemParams(omega_m=1.0, kappa=0.2, gamma=1e-5, delta=0.5,
                          a_tilde=0.07, b_tilde=0.2, n_th=100.0)
    sys_ = build_linear_system(params)
    weights, coef = _response_setup(params, Observable.SCC)
    omega = np.linspace(-3.0, 3.0, n)

    t_py, out_py = bench(_kernels_py, sys_.drift, sys_.noise_input, weights, coef, omega)
    print(f"python backend:   {n / t_py / 1e6:8.2f} Mfreq/s  ({t_py * 1e3:8.2f} ms for {n})")
    if _kernels_c is None:
        print("compiled backend: not built")
        return
    t_c, out_c = bench(_kernels_c, sys_.drift, sys_.noise_input, weights, coef, omega)
    print(f"compiled backend: {n / t_c / 1e6:8.2f} Mfreq/s  ({t_c * 1e3:8.2f} ms for {n})")
    rel = np.max(np.abs(out_c - out_py) / np.maximum(out_py, 1e-300))
    print(f"speedup: {t_py / t_c:.2f}x   max relative disagreement: {rel:.2e}")


if __name__ == "__main__":
    main()
