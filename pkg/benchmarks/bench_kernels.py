"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--n 12]

Numba compilation is paid once before timing.  Both backends are checked
to return the same values on every workload.
"""

import argparse
import timeit

import numpy as np

from roql._kernels import numba_impl, numpy_impl
from roql.basis import B2
from roql.candidates import candidate_set
from roql.formula import random_b2_formula, truth_table


def workloads(n: int, rng: np.random.Generator):
    bits = truth_table(random_b2_formula(n, rng)).bits
    small = truth_table(random_b2_formula(6, rng)).bits
    cands = candidate_set(B2, 5)
    idx = np.array(sorted(rng.choice(32, 12, replace=False)), dtype=np.uint64)
    vals = np.array([int(cands.tables[0] >> int(i)) & 1 for i in idx], dtype=np.uint8)
    fixed = (1 << n) - 1 - 0b1011
    return {
        "essential_mask": lambda k: k.essential_mask(bits, n),
        "project": lambda k: k.project(bits, n, fixed, fixed & 0x155),
        "constant_value": lambda k: k.constant_value(bits, n, fixed, fixed & 0x155),
        "first_hypercube_base": lambda k: k.first_hypercube_base(bits, n, 0b11 << (n - 2)),
        "all_hypercube_bases": lambda k: k.all_hypercube_bases(bits, n, 0b101),
        "consistent (B2, n=5)": lambda k: k.consistent(cands.tables, idx, vals),
        "discriminatory_subset (n=6)": lambda k: k.discriminatory_subset(small, 6, 0b1),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--n", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':30} {'numba (us)':>12} {'numpy (us)':>12} {'speedup':>8}")
    for name, call in workloads(args.n, rng).items():
        a, b = call(numba_impl), call(numpy_impl)
        assert np.array_equal(np.asarray(a), np.asarray(b)), f"{name}: backends disagree"
        times = {}
        for label, impl in (("numba", numba_impl), ("numpy", numpy_impl)):
            timer = timeit.Timer(lambda: call(impl))
            loops, _ = timer.autorange()
            best = min(timer.repeat(args.repeat, loops)) / loops
            times[label] = best * 1e6
        print(f"{name:30} {times['numba']:12.1f} {times['numpy']:12.1f} {times['numpy'] / times['numba']:7.1f}x")


if __name__ == "__main__":
    main()
