"""Compare the numba and numpy kernel backends on representative work.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

The script re-executes itself once per backend (the backend is chosen at
import time from AUTOSCOPE_BACKEND), times the closure, conjugacy-class
and automorphism-search kernels on mid-sized groups, and prints a
side-by-side table.  Timings are best-of-N wall clock; the first numba
call may include JIT compilation and is reported separately as "cold".
"""
from __future__ import annotations

import json
import os
import subprocess
import sys
from time import perf_counter

REPEATS = 5


def _workloads():
    import numpy as np

    from autoscope import kernels
    from autoscope.aut import automorphism_group
    from autoscope.catalog import load_catalog

    cat = load_catalog()
    g96 = cat.table3_group(17)          # central product extension, order 96
    et96 = g96.etab()
    big = cat.aut(43).action            # automorphism action, order 1920
    etbig = big.etab()

    rng = np.random.default_rng(7)
    pairs = rng.integers(1, g96.order(), size=(120, 2)).astype(np.int32)

    def w_close():
        for row in pairs:
            kernels.close_mask(et96.table, row)

    def w_classes_96():
        kernels.class_ids(et96.table, et96.inv, et96.gen_indices)

    def w_classes_1920():
        kernels.class_ids(etbig.table, etbig.inv, etbig.gen_indices)

    def w_aut_128():
        automorphism_group(cat.group(5).fresh())

    def w_aut_384():
        automorphism_group(cat.group(18).fresh())

    return [
        ("close_mask  (96^2 table, 120 pairs)", w_close),
        ("class_ids   (order 96)", w_classes_96),
        ("class_ids   (order 1920)", w_classes_1920),
        ("aut search  (|Aut| = 128)", w_aut_128),
        ("aut search  (|Aut| = 384)", w_aut_384),
    ]


def run_worker() -> None:
    from autoscope import kernels

    results = {"backend": kernels.BACKEND, "timings": {}}
    for name, fn in _workloads():
        t0 = perf_counter()
        fn()
        cold = perf_counter() - t0
        best = cold
        for _ in range(REPEATS - 1):
            t0 = perf_counter()
            fn()
            best = min(best, perf_counter() - t0)
        results["timings"][name] = {"cold": cold, "best": best}
    print(json.dumps(results))


def run_comparison() -> int:
    rows: dict[str, dict] = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, AUTOSCOPE_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker"],
            env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            sys.stderr.write(proc.stderr)
            print(f"{backend} worker failed", file=sys.stderr)
            return 1
        payload = json.loads(proc.stdout.strip().splitlines()[-1])
        if payload["backend"] != backend:
            print(f"requested {backend}, got {payload['backend']} "
                  "(numba unavailable?)", file=sys.stderr)
        rows[backend] = payload["timings"]

    names = list(rows["numba"])
    width = max(len(n) for n in names)
    print(f"{'workload':<{width}}  {'numba best':>11} {'numba cold':>11} "
          f"{'numpy best':>11} {'speedup':>8}")
    for n in names:
        nb, np_ = rows["numba"][n], rows["numpy"][n]
        speed = np_["best"] / nb["best"] if nb["best"] > 0 else float("inf")
        print(f"{n:<{width}}  {nb['best']:>10.4f}s {nb['cold']:>10.4f}s "
              f"{np_['best']:>10.4f}s {speed:>7.1f}x")
    return 0


if __name__ == "__main__":
    if "--worker" in sys.argv:
        run_worker()
    else:
        sys.exit(run_comparison())
