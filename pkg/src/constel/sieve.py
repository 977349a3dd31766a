"""Segmented sieve of Eratosthenes over arbitrary ranges.

Only odd numbers are represented in the sieve buffers; 2 is handled
explicitly.  Base primes up to the square root of the requested bound are
computed once per process and cached behind a lock, so concurrent segment
workers share them.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, ResourceError

DEFAULT_SEGMENT_LENGTH = 10**7
# Largest window a single materializing call will hold; wider requests must
# stream through iter_prime_chunks or the counting pipeline instead.
MAX_WINDOW = 2 * 10**8


@dataclass(frozen=True)
class RangeBounds:
    """Inclusive integer range [lo, hi] with lo >= 1."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 1:
            raise DomainError(f"range lower bound must be >= 1, got {self.lo}")
        if self.hi < self.lo:
            raise DomainError(f"empty range: hi={self.hi} < lo={self.lo}")

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True, eq=False)
class PrimeSegment:
    """The primes inside `bounds`, as an ascending int64 array."""

    bounds: RangeBounds
    primes: np.ndarray

    def __len__(self) -> int:
        return int(self.primes.shape[0])

    def __iter__(self):
        return iter(self.primes.tolist())


_cache_lock = threading.Lock()
_cached_primes = np.empty(0, dtype=np.int64)
_cached_bound = 1


def _simple_sieve(n: int) -> np.ndarray:
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p::p] = False
    out = np.flatnonzero(mask).astype(np.int64)
    out.setflags(write=False)
    return out


def base_primes(bound: int) -> np.ndarray:
    """Primes up to `bound` from the process-wide cache.

    The returned array is read-only; the cache only ever grows.
    """
    global _cached_primes, _cached_bound
    if bound < 2:
        return np.empty(0, dtype=np.int64)
    with _cache_lock:
        if bound > _cached_bound:
            _cached_primes = _simple_sieve(bound)
            _cached_bound = bound
            return _cached_primes
        cut = np.searchsorted(_cached_primes, bound, side="right")
        return _cached_primes[:cut]


def odd_flags(lo: int, hi: int) -> tuple[np.ndarray, int]:
    """Primality flags for the odd values in [lo, hi].

    Returns (flags, first_odd) where flags[i] is 1 exactly when
    first_odd + 2*i is prime.  The entry for 1 is cleared; 2 is not
    representable in an odd window.
    """
    first_odd = lo if lo % 2 else lo + 1
    if hi < first_odd:
        return np.empty(0, dtype=np.uint8), first_odd
    n = (hi - first_odd) // 2 + 1
    flags = np.ones(n, dtype=np.uint8)
    kernels.mark_odd_composites(flags, first_odd, base_primes(math.isqrt(hi)))
    if first_odd == 1:
        flags[0] = 0
    return flags, first_odd


def iter_prime_chunks(lo: int, hi: int,
                      segment_length: int = DEFAULT_SEGMENT_LENGTH):
    """Yield ascending int64 arrays that jointly hold the primes in [lo, hi].

    Memory stays bounded by the segment length regardless of the range
    width.  Chunks are non-empty and strictly increasing across the stream.
    """
    if lo < 1:
        raise DomainError(f"range lower bound must be >= 1, got {lo}")
    if segment_length < 2:
        raise DomainError("segment_length must be >= 2")
    if lo <= 2 <= hi:
        yield np.array([2], dtype=np.int64)
    cur = lo
    while cur <= hi:
        end = min(cur + segment_length - 1, hi)
        flags, first_odd = odd_flags(cur, end)
        if flags.size:
            chunk = first_odd + 2 * np.flatnonzero(flags)
            if chunk.size:
                yield chunk.astype(np.int64, copy=False)
        cur = end + 1


def primes_in_range(bounds: RangeBounds, max_window: int = MAX_WINDOW) -> PrimeSegment:
    """Exactly the primes in [bounds.lo, bounds.hi], materialized.

    Raises ResourceError when the window is wider than `max_window`; stream
    with iter_prime_chunks for wider ranges.
    """
    if bounds.width > max_window:
        raise ResourceError(
            f"window of width {bounds.width} exceeds the budget of "
            f"{max_window}; use iter_prime_chunks to stream it")
    chunks = list(iter_prime_chunks(bounds.lo, bounds.hi,
                                    segment_length=max_window))
    if chunks:
        primes = np.concatenate(chunks)
    else:
        primes = np.empty(0, dtype=np.int64)
    return PrimeSegment(bounds, primes)


def primes_up_to(n: int,
                 segment_length: int = DEFAULT_SEGMENT_LENGTH) -> PrimeSegment:
    """All primes p <= n as a PrimeSegment over [1, n]."""
    if n < 2:
        raise DomainError(f"need n >= 2 to produce any primes, got {n}")
    chunks = list(iter_prime_chunks(1, n, segment_length=segment_length))
    return PrimeSegment(RangeBounds(1, n), np.concatenate(chunks))


def count_primes(n: int,
                 segment_length: int = DEFAULT_SEGMENT_LENGTH) -> int:
    """The number of primes up to n, without materializing them."""
    if n < 1:
        raise DomainError(f"count_primes needs n >= 1, got {n}")
    total = 1 if n >= 2 else 0
    cur = 1
    while cur <= n:
        end = min(cur + segment_length - 1, n)
        flags, _ = odd_flags(cur, end)
        total += int(np.count_nonzero(flags))
        cur = end + 1
    return total
