"""Compare compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--sizes 10000 100000 1000000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from expsmooth import kernels


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    found = kernels.backends()
    if "cython" not in found:
        print("compiled kernels not built; only the fallback is timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'n':>10}" + "".join(f"{name + ' [s]':>14}" for name in found) + f"{'speedup':>10}")
    for n in args.sizes:
        t = np.concatenate([[0.0], np.cumsum(rng.exponential(1.0, n - 1))])
        alphas = np.ones(n)
        alphas[1:] = np.exp(-np.diff(t) / 5.0)
        x = rng.standard_normal(n)
        calls = {
            "fold_v1": lambda m: m.fold_v1(alphas, x),
            "fold_v2": lambda m: m.fold_v2(alphas, x, alphas[1]),
            "fold_v2c": lambda m: m.fold_v2c(alphas, x, alphas[1]),
            "fold_reference": lambda m: m.fold_reference(alphas, x),
        }
        for name, call in calls.items():
            times = {b: best_time(lambda: call(mod), args.repeat) for b, mod in found.items()}
            speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{name:<16}{n:>10}" + "".join(f"{v:>14.4f}" for v in times.values()) + f"{speedup:>9.0f}x")


if __name__ == "__main__":
    main()
