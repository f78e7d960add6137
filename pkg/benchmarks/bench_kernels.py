"""Compare the compiled and pure-Python M-profile kernels.

    python benchmarks/bench_kernels.py --sizes 500 2000 5000 --repeat 5
"""

import argparse
import timeit

import numpy as np

from rbmtail import _kernels_py

try:
    from rbmtail import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def desc_logs(n, seed=0):
    x = np.sort(np.random.default_rng(seed).pareto(2.0, n) + 1.0)[::-1]
    return np.ascontiguousarray(np.log(x / x[0]))


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[500, 2000, 5000])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    if _kernels_c is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'n':>7} {'python ms':>11} {'cython ms':>11} {'speedup':>8} {'max abs diff':>13}")
    for n in args.sizes:
        d = desc_logs(n)
        t_py = best_of(lambda: _kernels_py.mean_log_max_profile(d), args.repeat)
        if _kernels_c is None:
            print(f"{n:>7} {1e3 * t_py:>11.2f} {'-':>11} {'-':>8} {'-':>13}")
            continue
        t_c = best_of(lambda: _kernels_c.mean_log_max_profile(d), args.repeat)
        diff = np.max(np.abs(np.asarray(_kernels_py.mean_log_max_profile(d))
                             - np.asarray(_kernels_c.mean_log_max_profile(d))))
        print(f"{n:>7} {1e3 * t_py:>11.2f} {1e3 * t_c:>11.2f} {t_py / t_c:>7.1f}x {diff:>13.1e}")


if __name__ == "__main__":
    main()
