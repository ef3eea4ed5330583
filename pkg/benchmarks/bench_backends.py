"""Timing comparison of the compiled kernels against the numpy fallbacks.

Runs the three hot kernels (full neighbor scan, cached-base delta scan,
base update) under both backends on identical inputs, checks the outputs
are bitwise equal, then times a complete toy selection in subprocesses
with and without TNVS_DISABLE_NUMBA. Pure timing, no assertions on speed:
the contract is only that results never depend on the backend.

Usage: python benchmarks/bench_backends.py
"""

import os
import subprocess
import sys
import time

import numpy as np

from tnvs import _kernels_numpy
from tnvs._accel import BACKEND
from tnvs.codec import _nearest_neighbors_u

try:
    from tnvs import _kernels_numba
except ImportError:
    _kernels_numba = None

N = 2000
REPS = 5


def timeit(fn, reps=REPS):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernel(name, numba_fn, numpy_fn, check):
    t_np = timeit(numpy_fn)
    if numba_fn is None:
        print(f"{name:28s} numpy {t_np * 1e3:8.1f} ms   (numba unavailable)")
        return
    t_nb = timeit(numba_fn)
    check()
    print(f"{name:28s} numpy {t_np * 1e3:8.1f} ms   numba {t_nb * 1e3:8.1f} ms"
          f"   speedup {t_np / t_nb:5.1f}x   outputs equal")


def main():
    print(f"n = {N}, active backend: {BACKEND}")
    if _kernels_numba is None:
        print("numba not importable; timing the fallback only\n")

    rng = np.random.default_rng(0)
    u = rng.random(N)
    rows = np.arange(N, dtype=np.int64)
    out_a = np.empty(N, dtype=np.int64)
    out_b = np.empty(N, dtype=np.int64)

    for q in (1, 4):
        pts = np.ascontiguousarray(rng.standard_normal((N, q)))
        if _kernels_numba is not None:
            _kernels_numba.nn_rows(pts, rows[:4], u, out_a)  # compile once
        bench_kernel(
            f"nn_rows q={q}",
            (lambda: _kernels_numba.nn_rows(pts, rows, u, out_a))
            if _kernels_numba else None,
            lambda: _kernels_numpy.nn_rows(pts, rows, u, out_b),
            lambda: np.testing.assert_array_equal(out_a, out_b),
        )

    base = np.zeros((N, N))
    cols = [np.ascontiguousarray(rng.standard_normal(N)) for _ in range(3)]
    for c in cols:
        _kernels_numpy.add_column_sq_dists(base, c)
    x = np.ascontiguousarray(rng.standard_normal(N))

    if _kernels_numba is not None:
        _kernels_numba.nn_rows_delta(base, x, rows[:4], u, out_a)
    bench_kernel(
        "nn_rows_delta (3+1 dims)",
        (lambda: _kernels_numba.nn_rows_delta(base, x, rows, u, out_a))
        if _kernels_numba else None,
        lambda: _kernels_numpy.nn_rows_delta(base, x, rows, u, out_b),
        lambda: np.testing.assert_array_equal(out_a, out_b),
    )

    base_a = np.zeros((N, N))
    base_b = np.zeros((N, N))
    if _kernels_numba is not None:
        _kernels_numba.add_column_sq_dists(np.zeros((4, 4)),
                                           np.ascontiguousarray(x[:4]))
    # both sides accumulate the same number of times, so plain equality holds
    bench_kernel(
        "add_column_sq_dists",
        (lambda: _kernels_numba.add_column_sq_dists(base_a, x))
        if _kernels_numba else None,
        lambda: _kernels_numpy.add_column_sq_dists(base_b, x),
        lambda: np.testing.assert_array_equal(base_a, base_b),
    )

    pts = np.ascontiguousarray(rng.standard_normal((N, 2)))
    t_tree = timeit(lambda: _nearest_neighbors_u(pts, u, "kdtree"))
    t_scan = timeit(lambda: _nearest_neighbors_u(pts, u, "exhaustive"))
    print(f"{'neighbor search q=2':28s} tree  {t_tree * 1e3:8.1f} ms"
          f"   scan  {t_scan * 1e3:8.1f} ms")

    print("\nend-to-end toy selection (fresh process per backend):")
    snippet = (
        "import json, time; import numpy as np; "
        "from tnvs.simgen import generate_toy; "
        "from tnvs.selector import SelectorConfig, run_selection; "
        "data, _ = generate_toy(n=2000, seed=0); "
        "t0 = time.monotonic(); "
        "r = run_selection(data, SelectorConfig(seed=0)); "
        "print(json.dumps({'ms': (time.monotonic() - t0) * 1e3, "
        "'order': r.selection_order}))"
    )
    results = {}
    for label, disable in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, TNVS_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, "-c", snippet], env=env,
                             capture_output=True, text=True, check=True)
        results[label] = __import__("json").loads(out.stdout)
        print(f"  {label:6s} {results[label]['ms']:8.0f} ms   "
              f"selected {results[label]['order']}")
    if results["numba"]["order"] != results["numpy"]["order"]:
        raise SystemExit("backend changed the selection - determinism bug")
    print("  selections identical across backends")


if __name__ == "__main__":
    main()
