"""Benchmark: compiled frontier kernel vs the pure-Python fallback.

Times the raw walk (generator consumption on identical tables) and the
end-to-end singular-value computation for representative problems in each
of the three kernel arithmetics.  A cross-check on the first pops guards
against benchmarking two kernels that disagree.

Usage:
    python3 benchmarks/bench_frontier.py [--pops N] [--repeats R]
"""
import argparse
import math
import sys
import time
from itertools import islice

from hypercross import core, enumeration, _frontier_py

try:
    from hypercross import _frontier
except ImportError:
    _frontier = None

WORKLOADS = [
    ("float  d=3 s=(1,1.5,2) q=2", core.make_problem(3, [1.0, 1.5, 2.0], [2] * 3)),
    ("int    d=2 s=(1,2)     q=1", core.make_problem(2, [1, 2], [1, 1])),
    ("energy d=4 s=2         h1 ", core.make_problem(4, [2.0] * 4, [2] * 4, "h1")),
]


def _walk(kernel, weight, n_pops):
    """Consume n_pops frontier pops under `kernel`; return (count, seconds)."""
    saved = enumeration._kernel
    enumeration._kernel = kernel
    try:
        pops, _ = enumeration._start_walk(
            weight, n_pops // 2, enumeration.DEFAULT_NODE_BUDGET
        )
        start = time.perf_counter()
        consumed = sum(1 for _ in islice(pops, n_pops))
        elapsed = time.perf_counter() - start
    finally:
        enumeration._kernel = saved
    return consumed, elapsed


def _singular(kernel, weight, n_max):
    saved = enumeration._kernel
    enumeration._kernel = kernel
    try:
        start = time.perf_counter()
        enumeration.singular_values(weight, n_max)
        elapsed = time.perf_counter() - start
    finally:
        enumeration._kernel = saved
    return elapsed


def _cross_check(weight, n_pops):
    """First pops must agree exactly between the two kernels."""
    saved = enumeration._kernel
    try:
        enumeration._kernel = _frontier
        compiled = list(islice(enumeration._start_walk(weight, 50, 10**8)[0], n_pops))
        enumeration._kernel = _frontier_py
        pure = list(islice(enumeration._start_walk(weight, 50, 10**8)[0], n_pops))
    finally:
        enumeration._kernel = saved
    if compiled != pure:
        raise AssertionError("kernel disagreement -- benchmark aborted")


def _best(fn, repeats):
    return min(fn() for _ in range(repeats))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pops", type=int, default=200_000,
                        help="frontier pops per raw-walk measurement")
    parser.add_argument("--n-max", type=int, default=100_000,
                        help="singular values per end-to-end measurement")
    parser.add_argument("--repeats", type=int, default=3,
                        help="repetitions; the best time is reported")
    args = parser.parse_args(argv)

    if _frontier is None:
        print("compiled kernel not built; nothing to compare", file=sys.stderr)
        return 1

    header = f"{'workload':<28} {'measure':<10} {'compiled':>10} {'pure':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, spec in WORKLOADS:
        weight = core.weight_for(spec)
        _cross_check(weight, 1000)

        count, _ = _walk(_frontier, weight, args.pops)
        t_c = _best(lambda: _walk(_frontier, weight, args.pops)[1], args.repeats)
        t_p = _best(lambda: _walk(_frontier_py, weight, args.pops)[1], args.repeats)
        print(f"{label:<28} {'walk':<10} {t_c * 1e9 / count:>7.0f} ns {t_p * 1e9 / count:>7.0f} ns {t_p / t_c:>7.1f}x")

        t_c = _best(lambda: _singular(_frontier, weight, args.n_max), args.repeats)
        t_p = _best(lambda: _singular(_frontier_py, weight, args.n_max), args.repeats)
        print(f"{'':<28} {'a_n':<10} {t_c:>8.3f} s {t_p:>8.3f} s {t_p / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
