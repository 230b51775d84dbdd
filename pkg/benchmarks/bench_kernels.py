"""Compare the compiled and pure-Python inflow kernels.

Run with ``python benchmarks/bench_kernels.py [n]``. Prints per-call time
for single solves and per-point time for the vectorised grid, plus the
largest disagreement between the two backends.
"""

import sys
import timeit

import numpy as np

from rotorlin import _kernels_py

try:
    from rotorlin import _kernels
except ImportError:
    _kernels = None

A, SIGMA, ETA = 5.5064, 0.04765, 0.9


def grid(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.uniform(0, 0.15, n), rng.uniform(-0.05, 0.05, n), rng.uniform(0.0, 0.2, n)


def bench(mod, mu, muz, th, repeat=5):
    single = min(timeit.repeat(lambda: mod.solve_inflow(0.0, 0.0, 0.105, A, SIGMA, ETA),
                               number=2000, repeat=repeat)) / 2000
    vec = min(timeit.repeat(lambda: mod.inflow_grid(mu, muz, th, A, SIGMA, ETA),
                            number=1, repeat=repeat)) / len(mu)
    return single, vec


def main(n=20000):
    mu, muz, th = grid(n)
    rows = [("python", _kernels_py)]
    if _kernels is not None:
        rows.append(("cython", _kernels))
    results = {}
    for name, mod in rows:
        results[name] = bench(mod, mu, muz, th)
        print(f"{name:>7}: single solve {results[name][0] * 1e6:8.2f} us   grid {results[name][1] * 1e6:8.3f} us/point")
    if _kernels is None:
        print("compiled extension not built; only the pure-Python kernel was timed")
        return
    lp = _kernels_py.inflow_grid(mu, muz, th, A, SIGMA, ETA)[0]
    lc = _kernels.inflow_grid(mu, muz, th, A, SIGMA, ETA)[0]
    print(f"speedup: single {results['python'][0] / results['cython'][0]:.1f}x   "
          f"grid {results['python'][1] / results['cython'][1]:.1f}x")
    print(f"max |lambda_py - lambda_cy| = {np.max(np.abs(lp - lc)):.2e}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 20000)
