#!/usr/bin/env python3
"""Compare the compiled kernels against the NumPy fallback lane.

Both lanes run the same segmented pipeline: allocate odd-number flags per
segment, mark composites with the base primes, then scan for constellation
starts.  Counts must agree exactly; the table reports wall times and the
speedup of the compiled lane.

Usage: python benchmarks/bench_kernels.py [--limit 1e8] [--segment 1e7]
"""

import argparse
import math
import sys
import time

import numpy as np

from constel import _kernels_py
from constel.cli import parse_count
from constel.sieve import base_primes

try:
    from constel import _kernels
except ImportError:
    _kernels = None

PATTERNS = {
    "twin (0,2)": (0, 2),
    "quadruplet (0,2,6,8)": (0, 2, 6, 8),
    "sextuplet (0,2,6,8,12,18)": (0, 2, 6, 8, 12, 18),
}


def run_lane(kernel, offsets, limit, segment_length):
    span = offsets[-1]
    half = np.array([a // 2 for a in offsets], dtype=np.int64)
    base = base_primes(math.isqrt(limit + span))
    total = 0
    t0 = time.perf_counter()
    lo = 1
    while lo <= limit:
        hi = min(lo + segment_length - 1, limit)
        first_odd = lo if lo % 2 else lo + 1
        n = (hi + span - first_odd) // 2 + 1
        flags = np.ones(n, dtype=np.uint8)
        kernel.mark_odd_composites(flags, first_odd, base)
        if first_odd == 1:
            flags[0] = 0
        total += kernel.count_pattern_starts(flags, first_odd, lo, hi, half)
        lo = hi + 1
    return total, time.perf_counter() - t0


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--limit", type=parse_count, default=10**8)
    parser.add_argument("--segment", type=parse_count, default=10**7)
    args = parser.parse_args(argv)

    if _kernels is None:
        print("compiled extension not built; benchmarking the NumPy lane only")
    base_primes(math.isqrt(args.limit + 18))  # warm the shared cache

    name_w = max(len(n) for n in PATTERNS)
    print(f"limit {args.limit:,}, segment length {args.segment:,}")
    print(f"{'pattern'.ljust(name_w)}  {'count':>10}  {'numpy':>8}  "
          f"{'compiled':>8}  {'speedup':>7}")
    for name, offsets in PATTERNS.items():
        count_py, t_py = run_lane(_kernels_py, offsets, args.limit,
                                  args.segment)
        row = f"{name.ljust(name_w)}  {count_py:>10,}  {t_py:>7.2f}s"
        if _kernels is not None:
            count_c, t_c = run_lane(_kernels, offsets, args.limit,
                                    args.segment)
            if count_c != count_py:
                print(f"lane mismatch for {name}: {count_py} vs {count_c}")
                return 1
            row += f"  {t_c:>7.2f}s  {t_py / t_c:>6.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
