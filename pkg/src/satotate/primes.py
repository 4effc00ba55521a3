"""Segmented sieve of Eratosthenes: prime streams and exact prime counts.

All downstream prime sums index over "p <= x", so this module is the single
source of primes.  Segments are odd-only boolean bitmaps (one byte per odd
number with numpy), sized to stay cache-resident; 1 MiB of bitmap covers
2^21 integers.  The default desk-scale ceiling is 10^8; nothing enforces it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

DEFAULT_SEGMENT_BYTES = 1 << 20


@dataclass(frozen=True)
class PrimeRange:
    """A closed request [lo, hi] for primes, with sieving granularity."""

    lo: int
    hi: int
    segment_size: int = DEFAULT_SEGMENT_BYTES

    def __post_init__(self) -> None:
        if self.lo < 2:
            raise ValueError("lo must be >= 2")
        if self.hi < self.lo:
            raise ValueError("hi must be >= lo")
        if self.segment_size <= 0:
            raise ValueError("segment_size must be positive")


def _simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit by a plain boolean sieve (used for base primes)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _odd_segments(rng: PrimeRange) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (low, mask) pairs where mask[i] flags low + 2i prime, low odd."""
    base = _simple_sieve(math.isqrt(rng.hi))
    span = 2 * rng.segment_size  # integers covered per segment
    low = max(rng.lo, 3)
    if low % 2 == 0:
        low += 1
    while low <= rng.hi:
        high = min(low + span - 1, rng.hi)  # inclusive
        n_odd = (high - low) // 2 + 1
        mask = np.ones(n_odd, dtype=bool)
        for p in base[1:]:  # skip 2; odd numbers need no even strikes
            p = int(p)
            if p * p > high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start > high:
                continue
            mask[(start - low) // 2 :: p] = False
        yield low, mask
        low = high + 2 if (high - low) % 2 == 0 else high + 1


def primes_in(rng: PrimeRange) -> Iterator[int]:
    """Stream the primes in [rng.lo, rng.hi] in increasing order."""
    if rng.lo <= 2 <= rng.hi:
        yield 2
    for low, mask in _odd_segments(rng):
        seg = low + 2 * np.flatnonzero(mask)
        yield from seg.tolist()


def primes_array(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_BYTES) -> np.ndarray:
    """All primes in [lo, hi] as one int64 array (bulk form of primes_in)."""
    if hi < 2 or hi < lo:
        return np.empty(0, dtype=np.int64)
    rng = PrimeRange(max(lo, 2), hi, segment_size)
    chunks = []
    if rng.lo <= 2 <= rng.hi:
        chunks.append(np.array([2], dtype=np.int64))
    for low, mask in _odd_segments(rng):
        chunks.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


def prime_count(x: int) -> int:
    """pi(x) = #{p <= x}, by counting sieve segments (exact, not analytic)."""
    if x < 2:
        return 0
    count = 1  # p = 2
    for _, mask in _odd_segments(PrimeRange(2, x)):
        count += int(np.count_nonzero(mask))
    return count
