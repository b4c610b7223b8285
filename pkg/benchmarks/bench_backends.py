"""Time the compiled kernels against the pure numpy fallback.

Usage: python3 benchmarks/bench_backends.py [--n 10000000] [--q 1000003]

Each kernel runs on both backends (when both are importable) and the table
reports best-of-3 wall times plus the speedup.  Numbers are sanity checks,
not a rigorous benchmark; run on an idle machine before trusting them.
"""

import argparse
import math
import time

import numpy as np

from charsum._backend import available_backends, load_backend
from charsum.primefield import Modulus, find_primitive_root


def best_of(fn, repeats=3):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000_000,
                    help="table length for sieve and sum kernels")
    ap.add_argument("--q", type=int, default=1_000_003,
                    help="prime modulus for the character kernels")
    args = ap.parse_args()

    names = available_backends()
    backends = {name: load_backend(name) for name in names}
    if len(backends) == 1:
        print("compiled backend not built; timing the fallback only")

    N, q = args.n, args.q
    g = find_primitive_root(Modulus(q))

    # shared inputs so every backend times the same work
    ref = backends[names[0]]
    spf = ref.spf_sieve(N)
    mob = ref.mobius_table(spf)
    index = ref.char_index_table(q, g)
    m = (q - 1) // 2
    roots = np.exp(2j * math.pi * np.arange(q - 1) / (q - 1))

    cases = [
        ("spf_sieve(N)", lambda K: K.spf_sieve(N)),
        ("mobius_table", lambda K: K.mobius_table(spf)),
        ("liouville_table", lambda K: K.liouville_table(spf)),
        ("char_index_table(q)", lambda K: K.char_index_table(q, g)),
        ("sum_single over N", lambda K: K.sum_single(
            mob, index, roots, q, m, 1, 1, N)),
        ("sum_multi, 2 shifts", lambda K: K.sum_multi(
            mob, index, roots, q, m, np.array([1, 2], dtype=np.int64), 1, N)),
    ]

    col = max(len(label) for label, _ in cases)
    header = f"{'kernel'.ljust(col)}  " + "  ".join(f"{n:>10}" for n in names)
    if len(names) == 2:
        header += f"  {'speedup':>8}"
    print(f"N = {N:,}  q = {q:,}")
    print(header)
    print("-" * len(header))
    for label, make in cases:
        times = [best_of(lambda K=backends[n]: make(K)) for n in names]
        line = f"{label.ljust(col)}  " + "  ".join(f"{t:>9.3f}s" for t in times)
        if len(times) == 2:
            line += f"  {times[1] / times[0]:>7.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
