"""NumPy fallback for the compiled kernels.

Same contracts as `_kernels.pyx`; the test suite runs both lanes on identical
inputs and requires bit-for-bit agreement.
"""

import numpy as np


def mark_odd_composites(flags, first_odd, base_primes):
    """Clear flags of odd composites in an arithmetic window.

    flags[i] corresponds to the odd value first_odd + 2*i and must arrive
    pre-filled with ones.  Entries divisible by a base prime p with
    p*p <= value are zeroed; base primes themselves stay marked.
    """
    n = flags.shape[0]
    if n == 0:
        return
    last = first_odd + 2 * (n - 1)
    for p in base_primes:
        p = int(p)
        if p == 2:
            continue
        if p * p > last:
            break
        start = p * p
        if start < first_odd:
            start = ((first_odd + p - 1) // p) * p
            if start % 2 == 0:
                start += p
        flags[(start - first_odd) // 2::p] = 0


def count_pattern_starts(flags, first_odd, lo, hi, half_offsets):
    """Count constellation starts p in [lo, hi] within a flag window.

    A start at index i counts when flags[i + h] is set for every h in
    half_offsets.  Raises ValueError when the window does not extend past hi
    by the pattern span.
    """
    n = flags.shape[0]
    hmax = int(half_offsets.max()) if len(half_offsets) else 0
    if hi < first_odd:
        return 0
    i0 = 0 if lo <= first_odd else (lo - first_odd + 1) // 2
    i1 = (hi - first_odd) // 2
    if i1 + hmax >= n:
        raise ValueError("flag window does not cover the pattern lookahead")
    if i0 > i1:
        return 0
    acc = flags[i0:i1 + 1] != 0
    for h in half_offsets:
        h = int(h)
        if h:
            acc &= flags[i0 + h:i1 + 1 + h] != 0
    return int(np.count_nonzero(acc))
