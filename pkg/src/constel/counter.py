"""Constellation counting over segmented sieve windows.

A constellation is attributed to the segment holding its smallest member p,
and counts toward a limit n exactly when p <= n; the larger members may
exceed n.  Each segment is therefore sieved with a lookahead extension of
one pattern span so membership near the segment end can be decided locally.
Segments are independent, which makes the total count invariant under the
partition and safe to compute with worker threads.

Long runs can persist progress to a checkpoint file: a JSON document with a
sha256 checksum recording the contiguous prefix [1, covered_hi] already
counted.  Resuming validates the file, re-partitions the remaining range
with the same segment length, and produces exactly the result of an
uninterrupted run.  See the README for the on-disk schema.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, IntegrityError, LookaheadError
from .patterns import OffsetPattern
from .sieve import (DEFAULT_SEGMENT_LENGTH, PrimeSegment, RangeBounds,
                    base_primes, odd_flags)

CHECKPOINT_FORMAT = "constel-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class CountJob:
    """A counting request: pattern, inclusive limit, and segment length."""

    pattern: OffsetPattern
    limit: int
    segment_length: int = DEFAULT_SEGMENT_LENGTH

    def __post_init__(self):
        if self.limit < 2:
            raise DomainError(f"limit must be >= 2, got {self.limit}")
        if self.segment_length <= self.pattern.span:
            raise DomainError(
                f"segment_length {self.segment_length} must exceed the "
                f"pattern span {self.pattern.span}")


@dataclass(frozen=True, eq=False)
class ConstellationCount:
    """Result of a counting run; elapsed accumulates across resumed runs."""

    job: CountJob
    count: int
    segments_processed: int
    elapsed: float


def count_in_segment(pattern: OffsetPattern, bounds: RangeBounds,
                     window: PrimeSegment) -> int:
    """Count constellations whose smallest member lies in `bounds`.

    `window` must contain every prime in [bounds.lo, bounds.hi + span];
    raises LookaheadError when the extension is missing.  Membership is
    checked against the window's prime list, so this path is independent of
    the flag-based kernel used by count_up_to.
    """
    span = pattern.span
    if window.bounds.lo > bounds.lo or window.bounds.hi < bounds.hi + span:
        raise LookaheadError(
            f"window [{window.bounds.lo}, {window.bounds.hi}] does not cover "
            f"[{bounds.lo}, {bounds.hi + span}]; sieve with a lookahead of "
            f"the pattern span {span}")
    primes = window.primes
    lo_i = int(np.searchsorted(primes, bounds.lo, side="left"))
    hi_i = int(np.searchsorted(primes, bounds.hi, side="right"))
    starts = primes[lo_i:hi_i]
    if starts.size == 0:
        return 0
    alive = np.ones(starts.shape[0], dtype=bool)
    for a in pattern.offsets[1:]:
        member = starts + a
        idx = np.searchsorted(primes, member)
        found = idx < primes.shape[0]
        found[found] = primes[idx[found]] == member[found]
        alive &= found
    return int(np.count_nonzero(alive))


def _count_segment_flags(half_offsets: np.ndarray, span: int,
                         lo: int, hi: int) -> int:
    flags, first_odd = odd_flags(lo, hi + span)
    return kernels.count_pattern_starts(flags, first_odd, lo, hi, half_offsets)


def _partition(lo: int, hi: int, segment_length: int) -> list[tuple[int, int]]:
    return [(s, min(s + segment_length - 1, hi))
            for s in range(lo, hi + 1, segment_length)]


def _checkpoint_digest(data: dict) -> str:
    body = {k: v for k, v in data.items() if k != "sha256"}
    canon = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("ascii")).hexdigest()


def _save_checkpoint(path: str, job: CountJob, covered_hi: int,
                     partial_count: int, segments_done: int,
                     elapsed: float) -> None:
    data = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "pattern": list(job.pattern.offsets),
        "limit": job.limit,
        "segment_length": job.segment_length,
        "covered_hi": covered_hi,
        "partial_count": partial_count,
        "segments_done": segments_done,
        "elapsed": elapsed,
    }
    data["sha256"] = _checkpoint_digest(data)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)
        fh.write("\n")
    os.replace(tmp, path)


def _load_checkpoint(path: str, job: CountJob) -> dict:
    try:
        with open(path, encoding="ascii") as fh:
            data = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise IntegrityError(f"unreadable checkpoint {path}: {exc}") from exc
    if not isinstance(data, dict) or data.get("format") != CHECKPOINT_FORMAT:
        raise IntegrityError(f"{path} is not a counting checkpoint")
    if data.get("version") != CHECKPOINT_VERSION:
        raise IntegrityError(
            f"unsupported checkpoint version {data.get('version')!r}")
    required = ("pattern", "limit", "segment_length", "covered_hi",
                "partial_count", "segments_done", "elapsed", "sha256")
    missing = [k for k in required if k not in data]
    if missing:
        raise IntegrityError(f"checkpoint {path} lacks fields {missing}")
    if _checkpoint_digest(data) != data["sha256"]:
        raise IntegrityError(f"checkpoint {path} failed its checksum")
    if tuple(data["pattern"]) != job.pattern.offsets:
        raise IntegrityError(
            f"checkpoint pattern {data['pattern']} does not match job "
            f"pattern {list(job.pattern.offsets)}")
    if data["segment_length"] != job.segment_length:
        raise IntegrityError(
            f"checkpoint segment_length {data['segment_length']} does not "
            f"match job segment_length {job.segment_length}")
    if data["covered_hi"] > job.limit:
        raise IntegrityError(
            f"checkpoint already covers [1, {data['covered_hi']}], beyond "
            f"the requested limit {job.limit}")
    return data


def count_up_to(job: CountJob, threads: int = 1,
                checkpoint_path: str | None = None) -> ConstellationCount:
    """Count occurrences of the pattern with smallest member <= job.limit.

    With a checkpoint path, progress is saved after each contiguous advance
    and a matching existing file is resumed instead of recounted.  Raising
    the limit of a checkpointed run extends it; every other mismatch raises
    IntegrityError.  Results are independent of threads, segment length,
    and interruption points.
    """
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    t0 = time.perf_counter()
    span = job.pattern.span
    start_lo = 1
    base_count = 0
    base_segments = 0
    base_elapsed = 0.0
    if checkpoint_path and os.path.exists(checkpoint_path):
        state = _load_checkpoint(checkpoint_path, job)
        start_lo = state["covered_hi"] + 1
        base_count = state["partial_count"]
        base_segments = state["segments_done"]
        base_elapsed = state["elapsed"]
        if state["covered_hi"] >= job.limit:
            return ConstellationCount(job, base_count, base_segments,
                                      base_elapsed)
    segments = _partition(start_lo, job.limit, job.segment_length)
    half_offsets = np.array([a // 2 for a in job.pattern.offsets],
                            dtype=np.int64)
    base_primes(math.isqrt(job.limit + span))

    counts: dict[int, int] = {}
    flushed = 0
    total = base_count
    covered_hi = start_lo - 1
    segments_done = base_segments

    def flush_watermark() -> bool:
        nonlocal flushed, total, covered_hi, segments_done
        advanced = False
        while flushed in counts:
            total += counts.pop(flushed)
            covered_hi = segments[flushed][1]
            segments_done += 1
            flushed += 1
            advanced = True
        return advanced

    if threads == 1:
        for k, (lo, hi) in enumerate(segments):
            counts[k] = _count_segment_flags(half_offsets, span, lo, hi)
            flush_watermark()
            if checkpoint_path:
                _save_checkpoint(checkpoint_path, job, covered_hi, total,
                                 segments_done,
                                 base_elapsed + time.perf_counter() - t0)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {
                pool.submit(_count_segment_flags, half_offsets, span, lo, hi): k
                for k, (lo, hi) in enumerate(segments)}
            for future in as_completed(futures):
                counts[futures[future]] = future.result()
                if flush_watermark() and checkpoint_path:
                    _save_checkpoint(checkpoint_path, job, covered_hi, total,
                                     segments_done,
                                     base_elapsed + time.perf_counter() - t0)
    elapsed = base_elapsed + time.perf_counter() - t0
    if checkpoint_path:
        _save_checkpoint(checkpoint_path, job, job.limit, total,
                         segments_done, elapsed)
    return ConstellationCount(job, total, segments_done, elapsed)
