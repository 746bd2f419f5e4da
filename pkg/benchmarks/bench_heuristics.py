#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_heuristics.py [--sizes 100,500,1000] [--m 5]
"""

import argparse
import time

import numpy as np

from mtspkit import GridSpec, generate_uniform_instance
from mtspkit import kernels
from mtspkit._accel import HAS_NUMBA
from mtspkit.heuristics import balance_plan


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="100,500,1000")
    parser.add_argument("--m", type=int, default=5)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    kernels.warm_up()
    print(f"numba available: {HAS_NUMBA}")
    print(f"{'n':>6} {'kernel':>8} | {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for n in sizes:
        inst = generate_uniform_instance(GridSpec(n, 100, seed=n))
        quotas = balance_plan(n, args.m).quotas()
        dist = inst.matrix
        rows = [
            ("nearest", kernels._nearest_numba, kernels._nearest_numpy),
            ("closest", kernels._closest_numba, kernels._closest_numpy),
        ]
        for label, jit_fn, np_fn in rows:
            t_jit = time_call(jit_fn, dist, quotas, repeats=args.repeats)
            t_np = time_call(np_fn, dist, quotas, repeats=args.repeats)
            ratio = t_np / t_jit if t_jit > 0 else float("inf")
            print(
                f"{n:>6} {label:>8} | {t_jit * 1e3:>9.2f}ms {t_np * 1e3:>9.2f}ms "
                f"{ratio:>7.1f}x"
            )
        # sanity: both paths agree
        assert np.array_equal(
            kernels._nearest_numba(dist, quotas)[0],
            kernels._nearest_numpy(dist, quotas)[0],
        )


if __name__ == "__main__":
    main()
