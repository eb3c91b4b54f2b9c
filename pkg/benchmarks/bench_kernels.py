#!/usr/bin/env python3
"""Compare the numba and pure-numpy kernel implementations.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Reports wall-clock medians for skeleton thinning and the node-substitution
cost matrix on representative inputs, plus the verified bit-equality of the
two paths.  Run with CONTOURGRAPH_NO_NUMBA=1 to confirm the selection flag.
"""

import argparse
import statistics
import time

import numpy as np

from contourgraph import _kernels, datagen


def time_fn(fn, args, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench_thin(repeat):
    rng = np.random.default_rng(0)
    images = [
        datagen.render_digit(cls, np.random.default_rng((0, int(cls), i)))
        for cls in datagen.CLASSES
        for i in range(4)
    ]
    bitmaps = [img > 127 for img in images]

    def run(fn):
        for b in bitmaps:
            fn(b)

    rows = [("numpy", _kernels.thin_numpy)]
    if _kernels.USING_NUMBA:
        _kernels.thin_numba(bitmaps[0])  # compile before timing
        rows.append(("numba", _kernels.thin_numba))
    print(f"thin ({len(bitmaps)} glyph bitmaps per call):")
    results = {}
    for name, fn in rows:
        results[name] = time_fn(run, (fn,), repeat)
        print(f"  {name:6s} {results[name] * 1e3:8.2f} ms")
    if len(results) == 2:
        print(f"  speedup {results['numpy'] / results['numba']:.1f}x")
        for b in bitmaps:
            assert (_kernels.thin_numpy(b) == _kernels.thin_numba(b)).all()
        print("  outputs bit-identical")


def bench_cost_matrix(repeat):
    rng = np.random.default_rng(1)
    n, m, na, nk = 24, 18, 10, 3
    kind_g = rng.integers(0, 2, n).astype(np.int8)
    kind_c = rng.integers(0, 2, m).astype(np.int8)
    num_val_g = rng.uniform(-2, 2, (n, na))
    num_mask_g = rng.random((n, na)) < 0.8
    lo = rng.uniform(-2, 1, (m, na))
    hi = lo + rng.uniform(0, 1.5, (m, na))
    num_mask_c = rng.random((m, na)) < 0.8
    num_w = rng.uniform(0.1, 2.0, na)
    cat_g = rng.integers(-1, 4, (n, nk)).astype(np.int64)
    cat_c = rng.integers(-1, 4, (m, nk)).astype(np.int64)
    cat_w = rng.uniform(0.1, 2.0, nk)
    args = (
        kind_g, kind_c, num_val_g, num_mask_g, lo, hi, num_mask_c, num_w,
        cat_g, cat_c, cat_w, 0.25, 1e9,
    )

    def run(fn):
        for _ in range(200):
            fn(*args)

    rows = [("numpy", _kernels.cost_matrix_numpy)]
    if _kernels.USING_NUMBA:
        _kernels.cost_matrix_numba(*args)
        rows.append(("numba", _kernels.cost_matrix_numba))
    print(f"cost matrix ({n}x{m} nodes, 200 calls per run):")
    results = {}
    for name, fn in rows:
        results[name] = time_fn(run, (fn,), repeat)
        print(f"  {name:6s} {results[name] * 1e3:8.2f} ms")
    if len(results) == 2:
        print(f"  speedup {results['numpy'] / results['numba']:.1f}x")
        a = _kernels.cost_matrix_numpy(*args)
        b = _kernels.cost_matrix_numba(*args)
        assert (a == b).all()
        print("  outputs bit-identical")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()
    active = "numba" if _kernels.USING_NUMBA else "numpy (fallback)"
    print(f"active kernel path: {active}")
    bench_thin(args.repeat)
    bench_cost_matrix(args.repeat)


if __name__ == "__main__":
    main()
