#!/usr/bin/env python3
"""Side-by-side benchmark: numba @njit kernels vs the pure-numpy fallback.

Times impulse propagation and signed path closure on synthetic maps and
checks that both paths agree.  Run after an editable install:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from sedmap import kernels

if not kernels.NUMBA_ENABLED:
    raise SystemExit(
        "numba path unavailable (SEDMAP_DISABLE_NUMBA set or numba missing); "
        "nothing to compare"
    )


def sparse_weights(rng, n, per_row=3):
    w = np.zeros((n, n))
    for i in range(n):
        cols = rng.choice(n, size=min(per_row, n), replace=False)
        w[i, cols] = rng.uniform(-0.9, 0.9, len(cols))
    return w


def timed(fn, *args, repeats=5):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_propagate(rng):
    print("\nimpulse propagation (horizon steps of O' = W^T O + injection)")
    print(f"{'n':>5} {'T':>7} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    for n, horizon in [(10, 2_000), (30, 5_000), (50, 10_000), (100, 10_000)]:
        w = sparse_weights(rng, n) * 0.3
        y0 = rng.uniform(0, 1, n)
        inj = np.zeros((horizon + 1, n))
        inj[0] = rng.uniform(-1, 1, n)
        kernels.propagate_numba(w, y0, inj[: 2], False)  # compile outside timing
        t_np, (ys_a, _) = timed(kernels.propagate_numpy, w, y0, inj, False)
        t_nb, (ys_b, _) = timed(kernels.propagate_numba, w, y0, inj, False)
        agree = np.allclose(ys_a, ys_b, atol=1e-9)
        print(f"{n:>5} {horizon:>7} {t_np:>12.4f} {t_nb:>12.4f} {t_np / t_nb:>8.1f}x"
              + ("" if agree else "  MISMATCH"))


def bench_closure(rng):
    print("\nsigned simple-path closure (DFS over paths)")
    print(f"{'n':>5} {'edges':>7} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    for n, per_row in [(12, 3), (16, 3), (20, 3), (24, 3)]:
        w = sparse_weights(rng, n, per_row)
        kernels.closure_numba(w[:2, :2].copy())  # compile outside timing
        t_np, (vp_a, vm_a) = timed(kernels.closure_numpy, w, repeats=3)
        t_nb, (vp_b, vm_b) = timed(kernels.closure_numba, w, repeats=3)
        agree = np.array_equal(vp_a, vp_b) and np.array_equal(vm_a, vm_b)
        edges = int(np.count_nonzero(w))
        print(f"{n:>5} {edges:>7} {t_np:>12.4f} {t_nb:>12.4f} {t_np / t_nb:>8.1f}x"
              + ("" if agree else "  MISMATCH"))


def main():
    rng = np.random.default_rng(7)
    print("warming up JIT compilation...")
    start = time.perf_counter()
    kernels.propagate_numba(np.eye(2), np.zeros(2), np.zeros((2, 2)), False)
    kernels.closure_numba(np.eye(2))
    print(f"warmup {time.perf_counter() - start:.1f}s")
    bench_propagate(rng)
    bench_closure(rng)


if __name__ == "__main__":
    main()
