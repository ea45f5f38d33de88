#!/usr/bin/env python3
"""Benchmark: compiled Cython kernels vs the pure NumPy/Python fallback.

Times the three hot paths (dense curve evaluation, the self-intersection
functional, the combined generator objective) plus one end-to-end simplex
restart of the generator objective.

Run after building the extension:

    python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from beztopo._kernels import pure
from beztopo import optimize
from beztopo.selfx import sample_start

try:
    from beztopo._kernels import speedups
except ImportError:
    speedups = None


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench(name, pure_fn, fast_fn, unit_count):
    t_pure = best_of(pure_fn)
    row = f"{name:<34} {1e6 * t_pure / unit_count:>10.2f}"
    if fast_fn is not None:
        t_fast = best_of(fast_fn)
        row += f" {1e6 * t_fast / unit_count:>10.2f} {t_pure / t_fast:>8.1f}x"
    else:
        row += f" {'n/a':>10} {'':>9}"
    print(row)


def main():
    rng = np.random.default_rng(0)
    ctrl10 = rng.uniform(-10, 10, (11, 3))
    ts = rng.uniform(0, 1, 4096)
    q6 = rng.normal(size=(6, 3))
    sf_x = np.stack([sample_start(np.random.default_rng(i), 6) for i in range(2000)])

    print(f"{'kernel (per call, microseconds)':<34} {'pure':>10} "
          f"{'compiled':>10} {'speedup':>9}")
    bench("bezier_points deg10 x4096", lambda: pure.bezier_points(ctrl10, ts),
          (lambda: speedups.bezier_points(ctrl10, ts)) if speedups else None, 4096)
    ts2 = ts[:2]
    bench("bezier_points deg10 x2 (scan path)",
          lambda: [pure.bezier_points(ctrl10, ts2) for _ in range(500)],
          (lambda: [speedups.bezier_points(ctrl10, ts2) for _ in range(500)])
          if speedups else None, 500)
    bench("selfx_value n=6", lambda: [pure.selfx_value(q6, 0.3, 0.2) for _ in range(300)],
          (lambda: [speedups.selfx_value(q6, 0.3, 0.2) for _ in range(300)])
          if speedups else None, 300)
    bench("sf_value n=6", lambda: [pure.sf_value(x, 6) for x in sf_x],
          (lambda: [speedups.sf_value(x, 6) for x in sf_x]) if speedups else None,
          len(sf_x))

    # one full simplex restart of the generator objective
    x0 = sample_start(np.random.default_rng(42), 6)
    cfg = optimize.SimplexConfig(max_evals=20_000)

    def run(backend):
        def fn():
            optimize.minimize(lambda x: backend.sf_value(x, 6), x0, cfg)
        return fn

    t_pure = best_of(run(pure), repeats=3)
    line = f"{'simplex restart (seconds)':<34} {t_pure:>10.3f}"
    if speedups:
        t_fast = best_of(run(speedups), repeats=3)
        line += f" {t_fast:>10.3f} {t_pure / t_fast:>8.1f}x"
    print(line)
    if speedups is None:
        print("\ncompiled kernels not built; showing the fallback only")


if __name__ == "__main__":
    main()
