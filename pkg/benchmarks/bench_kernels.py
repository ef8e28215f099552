#!/usr/bin/env python3
"""Benchmark the compiled fiber kernels against the numpy fallback.

Times the three raw kernels on tables of several shapes, then an end-to-end
influence profile through each backend. Run after installing the package:

    python benchmarks/bench_kernels.py [--repeats 30]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from influence_lab import Domain, TabulatedFunction
from influence_lab import _kernels
from influence_lab._kernels import _fiberops_py
from influence_lab.influence import InfluenceProfile

SHAPES = [
    ("2^10 cube", (2,) * 10),
    ("2^14 cube", (2,) * 14),
    ("4^7 grid", (4,) * 7),
    ("3^9 grid", (3,) * 9),
    ("mixed 2-5", (2, 3, 4, 5, 2, 3, 4, 5)),
]


def geometry(arities, i):
    size = math.prod(arities)
    r = arities[i]
    inner = math.prod(arities[i + 1 :])
    return size // (r * inner), r, inner


def time_call(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(repeats):
    try:
        from influence_lab._kernels import _fiberops
    except ImportError:
        print("compiled kernels unavailable; nothing to compare")
        return

    print(f"{'shape':<12} {'kernel':<18} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for label, arities in SHAPES:
        size = math.prod(arities)
        boolean = (rng.random(size) < 0.5).astype(np.float64)
        real = rng.uniform(-1, 1, size)
        i = len(arities) // 2
        outer, r, inner = geometry(arities, i)
        w = np.full(r, 1.0 / r)
        cases = [
            ("nonconstant_mask", lambda m: m.nonconstant_mask(boolean, outer, r, inner, 0.0)),
            ("ones_per_fiber", lambda m: m.ones_per_fiber(boolean, outer, r, inner)),
            ("mean_var_per_fiber", lambda m: m.mean_var_per_fiber(real, w, outer, r, inner)),
        ]
        for name, call in cases:
            slow = time_call(lambda: call(_fiberops_py), repeats)
            fast = time_call(lambda: call(_fiberops), repeats)
            print(f"{label:<12} {name:<18} {slow * 1e6:>8.1f}us {fast * 1e6:>8.1f}us {slow / fast:>7.1f}x")


def bench_profiles(repeats):
    if "cython" not in _kernels.available_backends():
        return
    rng = np.random.default_rng(1)
    print()
    print(f"{'shape':<12} {'influence profile':<18} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    for label, arities in SHAPES:
        dom = Domain(arities)
        f = TabulatedFunction(dom, (rng.random(dom.size) < 0.5).astype(np.float64))
        timings = {}
        for backend in ("python", "cython"):
            _kernels.set_backend(backend)
            timings[backend] = time_call(lambda: InfluenceProfile.of(f), max(3, repeats // 5))
        _kernels.set_backend("cython")
        slow, fast = timings["python"], timings["cython"]
        print(f"{label:<12} {'full profile':<18} {slow * 1e3:>8.2f}ms {fast * 1e3:>8.2f}ms {slow / fast:>7.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=30)
    args = parser.parse_args()
    print(f"active backend at import: {_kernels.BACKEND}")
    bench_kernels(args.repeats)
    bench_profiles(args.repeats)


if __name__ == "__main__":
    main()
