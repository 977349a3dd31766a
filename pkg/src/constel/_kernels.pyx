# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: composite marking and constellation counting.

Semantics must stay in lockstep with `_kernels_py`; the test suite runs both
lanes on identical inputs and requires bit-for-bit agreement.
"""

from libc.stdlib cimport free, malloc


def mark_odd_composites(unsigned char[::1] flags, long long first_odd,
                        const long long[::1] base_primes):
    """Clear flags of odd composites in an arithmetic window.

    flags[i] corresponds to the odd value first_odd + 2*i and must arrive
    pre-filled with ones.  Every entry whose value has a prime factor
    p <= sqrt(value) with p in base_primes is set to zero; the base primes
    themselves stay marked because marking starts at p*p.  The caller is
    responsible for clearing the entry for 1 when first_odd == 1 and for
    handling the prime 2, which never appears in an odd window.
    """
    cdef Py_ssize_t n = flags.shape[0]
    cdef Py_ssize_t nb = base_primes.shape[0]
    cdef Py_ssize_t idx, step, j
    cdef long long last, p, start, q
    if n == 0:
        return
    last = first_odd + 2 * (n - 1)
    with nogil:
        for j in range(nb):
            p = base_primes[j]
            if p == 2:
                continue
            if p * p > last:
                break
            start = p * p
            if start < first_odd:
                # first odd multiple of p at or above first_odd
                q = (first_odd + p - 1) / p
                start = q * p
                if start % 2 == 0:
                    start += p
            idx = <Py_ssize_t>((start - first_odd) / 2)
            step = <Py_ssize_t>p
            while idx < n:
                flags[idx] = 0
                idx += step


def count_pattern_starts(const unsigned char[::1] flags, long long first_odd,
                         long long lo, long long hi,
                         const long long[::1] half_offsets):
    """Count constellation starts p in [lo, hi] within a flag window.

    flags[i] corresponds to first_odd + 2*i as in mark_odd_composites.  A
    start at index i counts when flags[i + h] is set for every h in
    half_offsets (the pattern offsets divided by two, first entry 0).  The
    window must extend past hi by the pattern span; raises ValueError when
    the lookahead is not covered.
    """
    cdef Py_ssize_t n = flags.shape[0]
    cdef Py_ssize_t k = half_offsets.shape[0]
    cdef Py_ssize_t i0, i1, i, j, h, w
    cdef long long total = 0
    cdef long long hmax = 0
    cdef unsigned char *acc
    cdef const unsigned char *src
    for j in range(k):
        if half_offsets[j] > hmax:
            hmax = half_offsets[j]
    if hi < first_odd:
        return 0
    if lo <= first_odd:
        i0 = 0
    else:
        i0 = <Py_ssize_t>((lo - first_odd + 1) / 2)
    i1 = <Py_ssize_t>((hi - first_odd) / 2)
    if i1 + <Py_ssize_t>hmax >= n:
        raise ValueError("flag window does not cover the pattern lookahead")
    w = i1 - i0 + 1
    if w <= 0:
        return 0
    if k == 0:
        return w
    # Branchless lane: AND the shifted windows into a byte accumulator so
    # the compiler can vectorize; the early-exit scalar form is 7x slower.
    acc = <unsigned char *>malloc(<size_t>w)
    if acc == NULL:
        raise MemoryError()
    h = <Py_ssize_t>half_offsets[0]
    with nogil:
        src = &flags[i0 + h]
        for i in range(w):
            acc[i] = src[i] != 0
        for j in range(1, k):
            src = &flags[i0 + <Py_ssize_t>half_offsets[j]]
            for i in range(w):
                acc[i] &= src[i] != 0
        for i in range(w):
            total += acc[i]
    free(acc)
    return total
