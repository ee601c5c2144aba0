"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --sizes 8 10 12 14 --repeat 5
"""
import argparse
import timeit

import numpy as np

from xprob import _pure

try:
    from xprob import _ckernels
except ImportError:
    _ckernels = None


def cases(n, rng):
    atoms = rng.uniform(-1, 1, n)
    table = np.round(rng.uniform(-1, 1, 1 << n), 3)
    table[0] = 0.0
    return {
        "subset_sums": lambda m: m.subset_sums(atoms),
        "max_abs_subset_sum": lambda m: m.max_abs_subset_sum(atoms),
        "ec3_violations": lambda m: m.ec3_violations(table, 1e-12),
        "disjoint_violations": lambda m: m.disjoint_violations(table, 1, 1e-12),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10, 12])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the numpy fallback is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'N':>4}{'numpy s':>12}{'cython s':>12}{'speedup':>9}")
    for n in args.sizes:
        for name, call in cases(n, rng).items():
            if name in ("ec3_violations", "disjoint_violations") and n > 12:
                continue  # quadratic in 2^N
            t_py = min(timeit.repeat(lambda: call(_pure), number=1, repeat=args.repeat))
            if _ckernels is None:
                print(f"{name:<22}{n:>4}{t_py:>12.5f}{'-':>12}{'-':>9}")
                continue
            t_c = min(timeit.repeat(lambda: call(_ckernels), number=1, repeat=args.repeat))
            print(f"{name:<22}{n:>4}{t_py:>12.5f}{t_c:>12.5f}{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
