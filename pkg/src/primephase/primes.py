"""Segmented sieve, streaming prime counting, and integer classification."""

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

# Default segment width.  Cache-friendly and keeps memory flat when counting
# up to 1e9; sieve_range refuses wider spans so callers cannot blow memory.
SEGMENT_SIZE = 1 << 20

# Largest x the sieve-based routines accept (64-bit arithmetic, desk scale).
SIEVE_LIMIT = 10**9


class Category(enum.Enum):
    """Partition of the integers >= 2 used for grouped statistics.

    1 is always excluded.  ALL = PRIME + EVEN_COMPOSITE + ODD_COMPOSITE;
    EVEN_COMPOSITE excludes 2 (which is prime), ODD excludes 1.
    """

    ALL = "all"
    PRIME = "prime"
    EVEN_COMPOSITE = "even_composite"
    ODD_COMPOSITE = "odd_composite"
    ODD = "odd"


@dataclass(frozen=True)
class SieveSegment:
    """Primality flags for the inclusive range [lo, hi]; flags[i] <=> lo+i is prime."""

    lo: int
    hi: int
    flags: np.ndarray

    def count(self) -> int:
        return int(np.count_nonzero(self.flags))


@lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve (limit stays around sqrt(SIEVE_LIMIT))."""
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime)


def sieve_range(lo: int, hi: int, limit: int = SEGMENT_SIZE) -> SieveSegment:
    """Sieve the inclusive range [lo, hi].

    Raises ValueError if lo < 2, lo > hi, or the span exceeds `limit`.
    """
    if lo < 2:
        raise ValueError(f"sieve range must start at 2 or above, got lo={lo}")
    if hi < lo:
        raise ValueError(f"empty sieve range [{lo}, {hi}]")
    if hi - lo + 1 > limit:
        raise ValueError(f"segment [{lo}, {hi}] exceeds the {limit}-integer limit")

    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in _base_primes(math.isqrt(hi) + 1):
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start > hi:
            continue
        flags[start - lo :: p] = False
        if lo <= p <= hi:
            flags[p - lo] = True
    return SieveSegment(lo, hi, flags)


def iter_segments(lo: int, hi: int, size: int = SEGMENT_SIZE) -> Iterator[SieveSegment]:
    """Yield consecutive SieveSegments covering [lo, hi] in order."""
    for seg_lo in range(lo, hi + 1, size):
        yield sieve_range(seg_lo, min(seg_lo + size - 1, hi), limit=size)


def pi_stream(n_max: int) -> Iterator[tuple[int, int]]:
    """Yield (x, pi(x)) for every integer x = 2 .. n_max.

    pi increments by exactly 1 at each prime, so the stream doubles as the
    primality sequence.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    count = 0
    for seg in iter_segments(2, n_max):
        for offset, flag in enumerate(seg.flags):
            count += int(flag)
            yield seg.lo + offset, count


def pi_at(x: int) -> int:
    """Exact pi(x), counting primes by segmented sieving."""
    if x < 2:
        raise ValueError(f"pi(x) requires x >= 2, got {x}")
    if x > SIEVE_LIMIT:
        raise ValueError(f"x={x} beyond sieve range; ingest a prime-count table instead")
    return sum(seg.count() for seg in iter_segments(2, x))


def classify(x: int, is_prime: bool) -> Category:
    """Category of a single integer given its primality."""
    if x < 2:
        raise ValueError(f"classification starts at 2, got {x}")
    if is_prime:
        return Category.PRIME
    return Category.EVEN_COMPOSITE if x % 2 == 0 else Category.ODD_COMPOSITE


def category_mask(category: Category, x: np.ndarray, prime: np.ndarray) -> np.ndarray:
    """Boolean mask selecting `category` members from a block of integers."""
    if category is Category.ALL:
        return np.ones_like(prime, dtype=bool)
    if category is Category.PRIME:
        return prime
    odd = x % 2 == 1
    if category is Category.EVEN_COMPOSITE:
        return ~odd & ~prime
    if category is Category.ODD_COMPOSITE:
        return odd & ~prime
    if category is Category.ODD:
        return odd
    raise ValueError(f"unknown category {category!r}")
