"""
Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

The first numba call compiles (or loads the on-disk cache); it is timed
separately and excluded from the steady-state figures.
"""

import argparse
import time

import numpy as np

from deltainv import _kernels as K


def _workloads(rng):
    M = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40))
    C = rng.standard_normal((14, 14)) + 0j
    coeffs = np.poly(np.linalg.eigvals(C)).astype(np.complex128)
    z0 = (4.0 * np.exp(1j * (2 * np.pi * np.arange(14) / 14 + 0.4))).astype(np.complex128)
    lengths = rng.integers(1, 60, size=2000).astype(np.int64)
    starts = np.concatenate([[0], np.cumsum(lengths)[:-1]]).astype(np.int64)
    base = rng.standard_normal(int(lengths.sum()))
    zeros = np.array([rng.integers(0, L) for L in lengths], dtype=np.int64)
    targets = np.array([rng.integers(0, L) for L in lengths], dtype=np.int64)
    x = rng.uniform(-50, 50, size=200_000)
    return {
        "eliminate 40x40": (K.eliminate_np, K.eliminate_jit, (M, 1e-12)),
        "charpoly 14x14": (K.charpoly_np, K.charpoly_jit, (C,)),
        "aberth deg 14": (K.aberth_np, K.aberth_jit, (coeffs, z0, 500, 1e-15)),
        "antidiff 2000 segs, depth 3": (
            K.antidiff_np,
            K.antidiff_jit,
            (base, starts, lengths, zeros, targets, 3),
        ),
        "sawtooth 2e5": (K.sawtooth_np, K.sawtooth_jit, (x, 0.7)),
    }


def _best(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print("backend in use: %s" % K.BACKEND)
    if not K.HAS_NUMBA:
        print("numba unavailable or disabled; only numpy timings are meaningful")
    rng = np.random.default_rng(args.seed)
    print("%-30s %12s %12s %12s %9s" % ("kernel", "first jit", "numpy", "numba", "speedup"))
    for name, (f_np, f_jit, fargs) in _workloads(rng).items():
        t0 = time.perf_counter()
        f_jit(*fargs)
        first = time.perf_counter() - t0
        t_np = _best(f_np, fargs, args.repeat)
        t_jit = _best(f_jit, fargs, args.repeat)
        print("%-30s %10.2fms %10.3fms %10.3fms %8.1fx" % (name, first * 1e3, t_np * 1e3, t_jit * 1e3, t_np / t_jit))


if __name__ == "__main__":
    main()
