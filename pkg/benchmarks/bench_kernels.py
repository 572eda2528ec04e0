"""Compare the compiled and pure-numpy kernel backends.

Times the chart/metric kernels on identical random inputs and reports
per-call latency and speedup.  Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from nks3x3._core import get_backend


def _random_inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    centers = rng.normal(size=(n, 8))
    centers[:, :4] /= np.linalg.norm(centers[:, :4], axis=1, keepdims=True)
    centers[:, 4:] /= np.linalg.norm(centers[:, 4:], axis=1, keepdims=True)
    coords = 0.3 * rng.normal(size=(n, 6))
    tangents = rng.normal(size=(n, 8))
    return centers, coords, tangents


def _time(fn, args_iter):
    t0 = time.perf_counter()
    for args in args_iter:
        fn(*args)
    return time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=300,
                    help="random inputs per kernel (default 300)")
    args = ap.parse_args()
    n = args.repeats
    centers, coords, tangents = _random_inputs(n)
    cases = {
        "chart_point": [(centers[i], coords[i]) for i in range(n)],
        "chart_frame": [(centers[i], coords[i]) for i in range(n)],
        "metric_matrix": [(centers[i], coords[i]) for i in range(n)],
        "metric_derivs": [(centers[i], coords[i], 1e-4) for i in range(n)],
        "j_matrix": [(centers[i], coords[i]) for i in range(n)],
        "tangent_coords": [(centers[i], coords[i], tangents[i]) for i in range(n)],
    }
    slow = get_backend("python")
    try:
        fast = get_backend("compiled")
    except ImportError:
        print("compiled backend not built; run: python3 setup.py build_ext --inplace")
        return
    print(f"{'kernel':16s} {'python':>12s} {'compiled':>12s} {'speedup':>9s}")
    for name, case_args in cases.items():
        # warm up both
        _time(getattr(slow, name), case_args[:5])
        _time(getattr(fast, name), case_args[:5])
        ts = _time(getattr(slow, name), case_args)
        tf = _time(getattr(fast, name), case_args)
        print(f"{name:16s} {1e6 * ts / n:>10.1f}us {1e6 * tf / n:>10.1f}us "
              f"{ts / tf:>8.1f}x")


if __name__ == "__main__":
    main()
