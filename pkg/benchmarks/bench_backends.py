#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the two hot kernels in isolation and a full default-scale Monte
Carlo round under each backend.  Run after an in-place build:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from isacsim import ScenarioConfig, kernels
from isacsim.mcengine import run_round


def bench(label, fn, repeat=5):
    best = min(timeit_once(fn) for _ in range(repeat))
    print(f"  {label:30s} {best * 1e3:9.2f} ms")
    return best


def timeit_once(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    rng = np.random.default_rng(0)
    u = rng.random(1_000_000)
    m, k1 = 200, 15
    mp = rng.uniform(1e-13, 1e-8, (m, k1))
    se = rng.uniform(0.1, 8.0, (m, k1))
    dist = rng.uniform(50.0, 1500.0, (m, k1))
    config = ScenarioConfig(master_seed=5)

    def rounds():
        for i in range(100):
            run_round(config, i)

    results = {}
    for name in kernels.available_backends():
        kernels.set_backend(name)
        print(f"backend: {name}")
        results[name, "radial"] = bench(
            "radial_inverse_cdf (1e6)", lambda:
            kernels.radial_inverse_cdf(u, 2e-3, 0.0, 1500.0))
        results[name, "assoc"] = bench(
            "associate (200x15, 100 reps)", lambda:
            [kernels.associate(mp, se, dist, 1e7, 2e6) for _ in range(100)])
        results[name, "round"] = bench("full rounds (100, default scale)",
                                       rounds, repeat=3)

    if len(kernels.available_backends()) == 2:
        print("speedup compiled vs python:")
        for key in ("radial", "assoc", "round"):
            ratio = results["python", key] / results["compiled", key]
            print(f"  {key:10s} {ratio:5.2f}x")


if __name__ == "__main__":
    main()
