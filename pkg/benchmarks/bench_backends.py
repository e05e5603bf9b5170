#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_backends.py [--sizes 101,401,1001] [--repeats 5]

Times the tridiagonal eigensolver and the RK4 integrator on BI lattices and
prints one row per size with both backends and the speedup.  The first numba
call includes JIT compilation; it is excluded by a warmup pass (compiled
kernels are cached on disk afterwards).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from binlat.kernels import numpy_impl
from binlat.lattice import LatticeSpec, build_hamiltonian

try:
    from binlat.kernels import numba_impl
except ImportError:
    numba_impl = None


def _best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eigh(n, repeats):
    H = build_hamiltonian(LatticeSpec.bi(0.5, n))
    d, e = H.diagonal, H.offdiagonal
    rows = {}
    rows["numpy"] = _best_of(lambda: numpy_impl.tridiag_eigh(d, e), repeats)
    if numba_impl is not None:
        numba_impl.tridiag_eigh(d, e)  # warmup / compile
        rows["numba"] = _best_of(lambda: numba_impl.tridiag_eigh(d, e), repeats)
    return rows


def bench_rk4(n, repeats, t=10.0):
    H = build_hamiltonian(LatticeSpec.bi(0.5, n))
    d, e = H.diagonal, H.offdiagonal
    a0 = np.zeros(n, dtype=np.complex128)
    a0[n // 2] = 1.0
    steps = int(np.ceil(t * H.norm_bound() / 0.05))
    rows = {}
    rows["numpy"] = _best_of(lambda: numpy_impl.rk4_evolve(d, e, a0, t, steps), repeats)
    if numba_impl is not None:
        numba_impl.rk4_evolve(d, e, a0, t, steps)
        rows["numba"] = _best_of(lambda: numba_impl.rk4_evolve(d, e, a0, t, steps), repeats)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="101,401,1001")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if numba_impl is None:
        print("numba not importable; timing the numpy fallback only\n")

    header = f"{'kernel':<14}{'N':>6}{'numpy [ms]':>14}{'numba [ms]':>14}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, bench in (("tridiag_eigh", bench_eigh), ("rk4_evolve", bench_rk4)):
        for n in sizes:
            rows = bench(n, args.repeats)
            np_ms = rows["numpy"] * 1e3
            if "numba" in rows:
                nb_ms = rows["numba"] * 1e3
                print(f"{name:<14}{n:>6}{np_ms:>14.2f}{nb_ms:>14.2f}{np_ms / nb_ms:>9.1f}x")
            else:
                print(f"{name:<14}{n:>6}{np_ms:>14.2f}{'-':>14}{'-':>10}")


if __name__ == "__main__":
    main()
