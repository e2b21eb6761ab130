"""Compare the compiled and pure-Python kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--problems 200] [--repeat 3] [--seed 0]

Both backends are imported directly, so the choice made at package import
(and ``MAXENT_PURE_PYTHON``) does not matter here.
"""
import argparse
import sys
import time

import numpy as np

from maxentstate import _pykernels

try:
    from maxentstate import _ckernels
except ImportError:
    _ckernels = None


def make_problems(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, 11))
        a = np.sort(rng.uniform(-5, 5, n))
        d = 0.01 * (a[-1] - a[0])
        out.append((a, float(rng.uniform(a[0] + d, a[-1] - d))))
    return out


def workloads(problems):
    def solve_all(k):
        iters = 0
        for a, e in problems:
            iters += k.fixed_point(a, e, 0.0, 1e-12, 1e-14, 1_000_000, False)[2]
        return iters

    def residual_grid(k):
        count = 0
        for a, e in problems:
            for t in np.linspace(-20, 20, 200):
                k.residual(a, e, float(t))
                count += 1
        return count

    def derivative_grid(k):
        count = 0
        for a, _ in problems:
            for t in np.linspace(-20, 20, 200):
                k.residual_derivative(a, float(t))
                count += 1
        return count

    return {
        "fixed_point (solve)": solve_all,
        "residual x200": residual_grid,
        "residual_derivative x200": derivative_grid,
    }


def best_of(fn, kernels, repeat):
    best, work = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        work = fn(kernels)
        best = min(best, time.perf_counter() - t0)
    return best, work


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--problems", type=int, default=200)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _ckernels is None:
        print("compiled kernels are not built; only the Python backend can run", file=sys.stderr)
        return 1
    problems = make_problems(args.problems, args.seed)
    print(f"{len(problems)} problems, best of {args.repeat}")
    print(f"{'workload':<26}{'cython s':>12}{'python s':>12}{'speedup':>10}{'work':>12}")
    for name, fn in workloads(problems).items():
        tc, wc = best_of(fn, _ckernels, args.repeat)
        tp, wp = best_of(fn, _pykernels, args.repeat)
        assert wc == wp, f"{name}: backends did different amounts of work ({wc} vs {wp})"
        print(f"{name:<26}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x{wc:>12}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
